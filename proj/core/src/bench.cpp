#include "nmls/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "format.hpp"
#include "nmls/directions.hpp"
#include "nmls/engine.hpp"

namespace nmls {

std::string SolverSpec::label() const {
  auto out = rule.label();
  if (direction != "bfgs") out += "/" + direction;
  return out;
}

std::vector<SolverSpec> parse_solver_list(std::string_view text, const std::string& direction) {
  make_direction(direction);  // rejects unknown ids up front
  std::vector<SolverSpec> out;
  for (const auto& part : split_top_level(text)) {
    if (part.empty()) continue;
    out.push_back({parse_rule_spec(part), direction});
  }
  return out;
}

std::vector<SolverSpec> default_suite_solvers() {
  return parse_solver_list("m1,nm1,nm2,nm3,nm4,nm5(eps,2),nm5(eps,1)");
}

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void stamp(std::ostream& out, bool timestamp) {
  if (timestamp) out << "# generated " << utc_now() << "\r\n";
}

std::string num(double v) { return detail::shortest(v); }

}  // namespace

RunOutput run_one(const Problem& problem, const Vector& x0, const SolverSpec& solver, const SolverConfig& cfg,
                  const RunOptions& options) {
  RunOutput out;
  out.result.problem_id = problem.id;
  out.result.solver_id = solver.label();
  try {
    auto rule = make_rule(solver.rule);
    auto dir = make_direction(solver.direction);
    Trace trace = solve(problem, x0, *rule, *dir, cfg);
    auto& r = out.result;
    r.termination = trace.termination;
    r.solved = trace.termination == Termination::GradTolReached;
    r.iterations = static_cast<std::int64_t>(trace.records.size());
    r.f_evals = static_cast<std::int64_t>(trace.total_f_evals);
    r.f_best = trace.best_f(options.best_includes_trials);
    r.final_grad_norm = trace.final_grad_norm;
    if (options.keep_traces) out.trace = std::move(trace);
  } catch (const std::exception& e) {
    out.result.error = e.what();
    out.result.solved = false;
    out.result.f_best = std::numeric_limits<double>::quiet_NaN();
    out.result.final_grad_norm = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::vector<RunOutput> run_suite(const std::vector<Problem>& problems, const std::vector<SolverSpec>& solvers,
                                 const SolverConfig& cfg, const RunOptions& options) {
  std::vector<RunOutput> out(problems.size() * solvers.size());
  parallel_for(out.size(), options.jobs, [&](std::size_t i) {
    const auto& p = problems[i / solvers.size()];
    out[i] = run_one(p, p.x0, solvers[i % solvers.size()], cfg, options);
  });
  std::stable_sort(out.begin(), out.end(), [](const RunOutput& a, const RunOutput& b) {
    return std::tie(a.result.problem_id, a.result.solver_id) < std::tie(b.result.problem_id, b.result.solver_id);
  });
  return out;
}

std::size_t ProfileMatrix::solver_index(std::string_view solver) const {
  for (std::size_t i = 0; i < solvers.size(); ++i) {
    if (solvers[i] == solver) return i;
  }
  throw Error(ErrorCode::UnknownId, "no solver '" + std::string(solver) + "' in the profile");
}

ProfileMatrix performance_ratios(const std::vector<RunResult>& results) {
  ProfileMatrix m;
  auto index_of = [](std::vector<std::string>& names, const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
    names.push_back(name);
    return names.size() - 1;
  };
  std::vector<std::vector<std::optional<double>>> counts;
  for (const auto& r : results) {
    const auto p = index_of(m.problems, r.problem_id);
    const auto s = index_of(m.solvers, r.solver_id);
    if (counts.size() <= p) counts.resize(p + 1);
    if (r.solved && r.error.empty()) {
      if (counts[p].size() <= s) counts[p].resize(s + 1);
      counts[p][s] = std::max<double>(1.0, static_cast<double>(r.iterations));
    }
  }
  m.ratios.assign(m.problems.size(), std::vector<std::optional<double>>(m.solvers.size()));
  for (std::size_t p = 0; p < counts.size(); ++p) {
    counts[p].resize(m.solvers.size());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& n : counts[p]) {
      if (n) best = std::min(best, *n);
    }
    for (std::size_t s = 0; s < m.solvers.size(); ++s) {
      if (counts[p][s]) m.ratios[p][s] = *counts[p][s] / best;
    }
  }
  return m;
}

double rho(const ProfileMatrix& matrix, std::size_t solver, double tau) {
  if (matrix.problems.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& row : matrix.ratios) {
    if (row[solver] && *row[solver] <= tau) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(matrix.problems.size());
}

double rho(const ProfileMatrix& matrix, std::string_view solver, double tau) {
  return rho(matrix, matrix.solver_index(solver), tau);
}

std::vector<double> parse_tau_grid(std::string_view text) {
  const auto bad = [&] { return Error(ErrorCode::Parse, "tau grid must be start:step:stop, got '" + std::string(text) + "'"); };
  double v[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    auto end = i < 2 ? text.find(':', pos) : text.size();
    if (end == std::string_view::npos) throw bad();
    const std::string tok(text.substr(pos, end - pos));
    try {
      std::size_t used = 0;
      v[i] = std::stod(tok, &used);
      if (used != tok.size()) throw bad();
    } catch (const std::logic_error&) {
      throw bad();
    }
    pos = end + 1;
  }
  const double start = v[0], step = v[1], stop = v[2];
  if (!(step > 0.0) || !(start >= 1.0) || !(stop >= start)) {
    throw Error(ErrorCode::Parse, "tau grid needs 1 <= start <= stop and step > 0");
  }
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "percentile of an empty list");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "percentile level must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

PercentileRow summarize(const std::vector<double>& values) {
  return {percentile(values, 0.0), percentile(values, 0.25), percentile(values, 0.5), percentile(values, 0.75),
          percentile(values, 1.0)};
}

const PercentileRow& GriewankTable::row(std::string_view solver) const {
  for (std::size_t i = 0; i < solvers.size(); ++i) {
    if (solvers[i] == solver) return rows[i];
  }
  throw Error(ErrorCode::UnknownId, "no solver '" + std::string(solver) + "' in the table");
}

std::vector<SolverSpec> griewank_solvers(const std::vector<double>& thetas, SigmaSpec sigma, bool include_baselines) {
  std::vector<SolverSpec> out;
  if (include_baselines) out = parse_solver_list("m1,nm1,nm2,nm3,nm4,nm5(eps,2)");
  for (double theta : thetas) {
    RuleSpec r;
    r.name = "nm5";
    r.sigma = sigma;
    r.theta = theta;
    out.push_back({r, "bfgs"});
  }
  return out;
}

GriewankTable griewank_study(const std::vector<SolverSpec>& solvers, const std::vector<Vector>& starts,
                             const SolverConfig& cfg, const RunOptions& options) {
  GriewankTable table;
  table.best_f.assign(solvers.size(), std::vector<double>(starts.size()));
  RunOptions opts = options;
  opts.keep_traces = false;
  const Problem p = griewank_problem();
  parallel_for(solvers.size() * starts.size(), options.jobs, [&](std::size_t i) {
    const auto s = i / starts.size();
    const auto j = i % starts.size();
    table.best_f[s][j] = run_one(p, starts[j], solvers[s], cfg, opts).result.f_best;
  });
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    table.solvers.push_back(solvers[s].label());
    table.rows.push_back(summarize(table.best_f[s]));
  }
  return table;
}

GriewankTable griewank_study(const std::vector<double>& thetas, SigmaSpec sigma, const SolverConfig& cfg,
                             const RunOptions& options) {
  return griewank_study(griewank_solvers(thetas, sigma), griewank_grid(), cfg, options);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_results_csv(std::ostream& out, const std::vector<RunResult>& results, bool timestamp) {
  stamp(out, timestamp);
  out << "problem_id,solver_id,solved,iterations,f_evals,f_best,termination,final_grad_norm,error\r\n";
  for (const auto& r : results) {
    out << csv_field(r.problem_id) << ',' << csv_field(r.solver_id) << ',' << (r.solved ? "true" : "false") << ','
        << r.iterations << ',' << r.f_evals << ',' << num(r.f_best) << ','
        << (r.error.empty() ? std::string(to_string(r.termination)) : "Error") << ',' << num(r.final_grad_norm)
        << ',' << csv_field(r.error) << "\r\n";
  }
}

void write_ratios_csv(std::ostream& out, const ProfileMatrix& m, bool timestamp) {
  stamp(out, timestamp);
  out << "problem_id";
  for (const auto& s : m.solvers) out << ',' << csv_field(s);
  out << "\r\n";
  for (std::size_t p = 0; p < m.problems.size(); ++p) {
    out << csv_field(m.problems[p]);
    for (const auto& r : m.ratios[p]) out << ',' << (r ? num(*r) : "FAIL");
    out << "\r\n";
  }
}

void write_profile_csv(std::ostream& out, const ProfileMatrix& m, const std::vector<double>& taus, bool timestamp) {
  stamp(out, timestamp);
  out << "tau";
  for (const auto& s : m.solvers) out << ',' << csv_field(s);
  out << "\r\n";
  for (double tau : taus) {
    out << num(tau);
    for (std::size_t s = 0; s < m.solvers.size(); ++s) out << ',' << num(rho(m, s, tau));
    out << "\r\n";
  }
}

void write_griewank_csv(std::ostream& out, const GriewankTable& t, bool timestamp) {
  stamp(out, timestamp);
  out << "solver_id,min,p25,median,p75,max\r\n";
  for (std::size_t s = 0; s < t.solvers.size(); ++s) {
    const auto& r = t.rows[s];
    out << csv_field(t.solvers[s]) << ',' << num(r.min) << ',' << num(r.p25) << ',' << num(r.median) << ','
        << num(r.p75) << ',' << num(r.max) << "\r\n";
  }
}

}  // namespace nmls
