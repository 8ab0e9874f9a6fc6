#include "nmls/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "nmls/bench.hpp"
#include "nmls/directions.hpp"
#include "nmls/engine.hpp"
#include "nmls/problems.hpp"
#include "nmls/rules.hpp"
#include "nmls/theory.hpp"
#include "nmls/trace_io.hpp"

namespace fs = std::filesystem;

namespace nmls::cli {

namespace {

struct ConfigFlags {
  SolverConfig cfg;

  void attach(CLI::App& sub) {
    sub.add_option("--alpha0", cfg.alpha0, "Initial trial step")->capture_default_str();
    sub.add_option("--beta", cfg.beta, "Backtracking factor in (0,1)")->capture_default_str();
    sub.add_option("--rho", cfg.rho, "Armijo constant in (0,1)")->capture_default_str();
    sub.add_option("--grad-tol", cfg.grad_tol, "Stop when ||grad f|| <= grad-tol")->capture_default_str();
    sub.add_option("--k-max", cfg.k_max, "Iteration budget")->capture_default_str();
    sub.add_option("--l-max", cfg.l_max, "Largest backtracking index per iteration")->capture_default_str();
    sub.add_option("--step-floor", cfg.step_floor, "Abort the line search below this step")
        ->capture_default_str();
  }
};

struct OutputFlags {
  std::string out_dir = ".";
  bool no_timestamp = false;

  void attach(CLI::App& sub, bool csv) {
    sub.add_option("--out-dir", out_dir, "Output directory")->envname("NMLS_OUT_DIR")->capture_default_str();
    if (csv) sub.add_flag("--no-timestamp", no_timestamp, "Omit the '# generated' line from CSV files");
  }

  fs::path dir() const {
    fs::create_directories(out_dir);
    return out_dir;
  }
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return f;
}

std::string file_stem(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '_') c = '_';
  }
  return s;
}

Vector parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Parse, "bad number '" + tok + "' in '" + text + "'");
    }
  }
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::string vec_str(const Vector& v) {
  std::ostringstream out;
  out << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  out << ")";
  return out.str();
}

int exit_for(Termination t) {
  switch (t) {
    case Termination::GradTolReached: return kExitOk;
    case Termination::IterBudgetExhausted: return kExitBudget;
    case Termination::LineSearchStalled:
    case Termination::NonDescentDirection: return kExitNumerical;
  }
  return kExitNumerical;
}

// run ----------------------------------------------------------------------

struct RunCmd {
  std::string problem;
  std::string quadratic;
  std::string rule = "m1";
  std::string direction = "bfgs";
  std::string x0;
  std::string trace_path;
  ConfigFlags config;
  OutputFlags output;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("run", "Solve one problem and write its trace");
    sub->set_config("--config", "", "Read flags from a key=value file");
    auto* p = sub->add_option("--problem", problem, "Problem id (see list-problems)");
    auto* q = sub->add_option("--quadratic", quadratic, "Inline quadratic: spectrum, optionally '|b'");
    p->excludes(q);
    sub->add_option("--rule", rule, "m1, nm1..nm4, nm5(sigma,theta)")->capture_default_str();
    sub->add_option("--direction", direction, "sd or bfgs")->capture_default_str();
    sub->add_option("--x0", x0, "Comma-separated starting point (default: the problem's)");
    sub->add_option("--trace", trace_path, "Trace file (default: <out-dir>/<problem>__<rule>__<direction>.jsonl)");
    config.attach(*sub);
    output.attach(*sub, false);
  }

  int exec(std::ostream& out) {
    if (problem.empty() && quadratic.empty()) throw Error(ErrorCode::InvalidArgument, "--problem or --quadratic is required");
    const Problem prob = problem_by_id(problem.empty() ? "quadratic[" + quadratic + "]" : problem);
    auto rule_ptr = make_rule(rule);
    auto dir_ptr = make_direction(direction);
    config.cfg.validate();
    const Vector start = x0.empty() ? prob.x0 : parse_vector(x0);
    if (start.size() != prob.dim) {
      throw Error(ErrorCode::DimensionMismatch, prob.id + " has dimension " + std::to_string(prob.dim) +
                                                    ", --x0 has " + std::to_string(start.size()));
    }
    const fs::path path = trace_path.empty()
                              ? output.dir() / (file_stem(prob.id + "__" + rule_ptr->id() + "__" + direction) + ".jsonl")
                              : fs::path(trace_path);
    Trace trace = solve(prob, start, *rule_ptr, *dir_ptr, config.cfg);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    save_trace(path, trace);
    out << prob.id << " " << rule_ptr->label() << " " << direction << ": " << to_string(trace.termination)
        << " iterations=" << trace.iterations() << " f_evals=" << trace.total_f_evals << std::setprecision(10)
        << " f=" << trace.final_f << " grad_norm=" << trace.final_grad_norm << " trace=" << path.string() << "\n";
    return exit_for(trace.termination);
  }
};

// bench --------------------------------------------------------------------

struct BenchCmd {
  std::string solvers = "m1,nm1,nm2,nm3,nm4,nm5(eps,2),nm5(eps,1)";
  std::string direction = "bfgs";
  std::vector<std::string> problems;
  std::string tau_grid = "1:0.05:10";
  unsigned jobs = 1;
  bool accepted_only = false;
  bool no_traces = false;
  ConfigFlags config;
  OutputFlags output;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("bench", "Run the solver suite and write performance profiles");
    sub->set_config("--config", "", "Read flags from a key=value file");
    sub->add_option("--solvers", solvers, "Comma-separated rule specs")->capture_default_str();
    sub->add_option("--direction", direction, "sd or bfgs")->capture_default_str();
    sub->add_option("--problem", problems, "Problem id; repeatable (default: the MGH subset)");
    sub->add_option("--tau-grid", tau_grid, "Profile sampling start:step:stop")->capture_default_str();
    sub->add_option("--jobs", jobs, "Concurrent runs (0: all cores)")->capture_default_str();
    sub->add_flag("--accepted-only", accepted_only, "f_best over accepted iterates only");
    sub->add_flag("--no-traces", no_traces, "Do not write per-run traces");
    config.attach(*sub);
    output.attach(*sub, true);
  }

  int exec(std::ostream& out) {
    const auto specs = parse_solver_list(solvers, direction);
    const auto taus = parse_tau_grid(tau_grid);
    config.cfg.validate();
    std::vector<Problem> probs;
    if (problems.empty()) {
      probs = mgh_subset();
    } else {
      for (const auto& id : problems) probs.push_back(problem_by_id(id));
    }
    RunOptions opts;
    opts.best_includes_trials = !accepted_only;
    opts.keep_traces = !no_traces;
    opts.jobs = jobs;
    const auto runs = run_suite(probs, specs, config.cfg, opts);

    const fs::path dir = output.dir();
    std::vector<RunResult> results;
    for (const auto& r : runs) results.push_back(r.result);
    if (!no_traces) {
      fs::create_directories(dir / "traces");
      for (const auto& r : runs) {
        if (r.trace) save_trace(dir / "traces" / (file_stem(r.result.problem_id + "__" + r.result.solver_id) + ".jsonl"), *r.trace);
      }
    }
    const auto matrix = performance_ratios(results);
    const bool ts = !output.no_timestamp;
    auto f1 = open_out(dir / "results.csv");
    write_results_csv(f1, results, ts);
    auto f2 = open_out(dir / "ratios.csv");
    write_ratios_csv(f2, matrix, ts);
    auto f3 = open_out(dir / "profile.csv");
    write_profile_csv(f3, matrix, taus, ts);

    out << std::left << std::setw(14) << "solver" << std::right << std::setw(8) << "solved" << std::setw(10)
        << "rho(1)" << "\n";
    for (std::size_t s = 0; s < matrix.solvers.size(); ++s) {
      const auto solved = std::count_if(results.begin(), results.end(), [&](const RunResult& r) {
        return r.solver_id == matrix.solvers[s] && r.solved;
      });
      out << std::left << std::setw(14) << matrix.solvers[s] << std::right << std::setw(5) << solved << "/"
          << std::left << std::setw(2) << matrix.problems.size() << std::right << std::setw(10) << std::fixed
          << std::setprecision(3) << rho(matrix, s, 1.0) << "\n";
    }
    out.unsetf(std::ios::floatfield);
    out << "wrote " << (dir / "results.csv").string() << ", ratios.csv, profile.csv\n";
    return kExitOk;
  }
};

// griewank -----------------------------------------------------------------

struct GriewankCmd {
  std::vector<double> thetas{4.0, 2.0, 1.0, 0.5, 0.25, 0.125};
  std::string sigma = "abs_f0";
  bool no_baselines = false;
  unsigned jobs = 1;
  bool accepted_only = false;
  ConfigFlags config;
  OutputFlags output;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("griewank", "Best-f percentiles over the 60-point Griewank grid");
    sub->set_config("--config", "", "Read flags from a key=value file");
    sub->add_option("--thetas", thetas, "NM5 theta values")->delimiter(',')->capture_default_str();
    sub->add_option("--sigma", sigma, "NM5 sigma: abs_f0, eps or a number")->capture_default_str();
    sub->add_flag("--no-baselines", no_baselines, "Only the NM5(sigma, theta) columns");
    sub->add_option("--jobs", jobs, "Concurrent runs (0: all cores)")->capture_default_str();
    sub->add_flag("--accepted-only", accepted_only, "f_best over accepted iterates only");
    config.attach(*sub);
    output.attach(*sub, true);
  }

  int exec(std::ostream& out) {
    const SigmaSpec sig = parse_rule_spec("nm5(" + sigma + ",1)").sigma;
    config.cfg.validate();
    RunOptions opts;
    opts.best_includes_trials = !accepted_only;
    opts.jobs = jobs;
    const auto table = griewank_study(griewank_solvers(thetas, sig, !no_baselines), griewank_grid(), config.cfg, opts);
    const fs::path dir = output.dir();
    auto f = open_out(dir / "griewank.csv");
    write_griewank_csv(f, table, !output.no_timestamp);

    out << std::left << std::setw(18) << "solver" << std::right;
    for (const char* h : {"min", "p25", "median", "p75", "max"}) out << std::setw(12) << h;
    out << "\n" << std::fixed << std::setprecision(4);
    for (std::size_t s = 0; s < table.solvers.size(); ++s) {
      const auto& r = table.rows[s];
      out << std::left << std::setw(18) << table.solvers[s] << std::right << std::setw(12) << r.min << std::setw(12)
          << r.p25 << std::setw(12) << r.median << std::setw(12) << r.p75 << std::setw(12) << r.max << "\n";
    }
    out.unsetf(std::ios::floatfield);
    out << "wrote " << (dir / "griewank.csv").string() << "\n";
    return kExitOk;
  }
};

// verify -------------------------------------------------------------------

struct VerifyCmd {
  std::vector<std::string> traces;
  std::optional<double> L, c1, c2, f_low;
  bool known_constants = false;
  std::string report;
  OutputFlags output;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("verify", "Audit trace files against the complexity bounds");
    sub->set_config("--config", "", "Read flags from a key=value file");
    sub->add_option("traces", traces, "Trace files")->required()->check(CLI::ExistingFile);
    sub->add_option("--L", L, "Lipschitz constant of the gradient");
    sub->add_option("--c1", c1, "Descent constant: <g,d> <= -c1 ||g||^2");
    sub->add_option("--c2", c2, "Descent constant: ||d|| <= c2 ||g||");
    sub->add_option("--f-low", f_low, "Lower bound on f");
    sub->add_flag("--known-constants", known_constants,
                  "Take L and f_low from the problem registry, and c1 = c2 = 1 for sd traces");
    sub->add_option("--report", report, "JSON report path (default: <out-dir>/report.json)");
    output.attach(*sub, false);
  }

  int exec(std::ostream& out) {
    std::vector<std::string> json;
    bool all_passed = true;
    for (const auto& path : traces) {
      const Trace t = load_trace(path);
      auto L_ = L, c1_ = c1, c2_ = c2, f_low_ = f_low;
      if (known_constants) {
        const Problem p = problem_by_id(t.problem_id);
        if (!L_) L_ = p.lipschitz_known;
        if (!f_low_) f_low_ = p.f_low_known;
        if (t.direction_id == "sd") {
          if (!c1_) c1_ = 1.0;
          if (!c2_) c2_ = 1.0;
        }
      }
      const auto rep = audit(t, Constants::from_trace(t, L_, c1_, c2_, f_low_));
      all_passed = all_passed && rep.passed();
      out << path << "\n" << to_table(rep);
      json.push_back(to_json(rep));
    }
    const fs::path rpath = report.empty() ? output.dir() / "report.json" : fs::path(report);
    if (rpath.has_parent_path()) fs::create_directories(rpath.parent_path());
    auto f = open_out(rpath);
    if (json.size() == 1) {
      f << json.front() << "\n";
    } else {
      f << "[\n";
      for (std::size_t i = 0; i < json.size(); ++i) f << json[i] << (i + 1 < json.size() ? ",\n" : "\n");
      f << "]\n";
    }
    out << (all_passed ? "all verdicts passed" : "FAILED verdicts present") << "; report " << rpath.string() << "\n";
    return all_passed ? kExitOk : kExitVerdict;
  }
};

// listings -----------------------------------------------------------------

std::string opt_str(const std::optional<double>& v) {
  if (!v) return "-";
  std::ostringstream s;
  s << std::setprecision(10) << *v;
  return s.str();
}

void list_problems(std::ostream& out) {
  out << "# id dim x0 L f_low\n";
  for (const auto& p : registered_problems()) {
    out << p.id << " " << p.dim << " " << vec_str(p.x0) << " L=" << opt_str(p.lipschitz_known)
        << " f_low=" << opt_str(p.f_low_known) << "\n";
  }
  out << "quadratic[s1,...,sn|b1,...,bn] n inline ones L=max(s) f_low=f(D^-1 b)\n";
}

void list_rules(std::ostream& out) {
  out << "rules:\n"
         "  m1               monotone Armijo, nu = 0\n"
         "  nm1              max over the last min(k,10)+1 accepted values\n"
         "  nm2              running weighted average C_k (eta = 0.85)\n"
         "  nm3              nu_k = grad_tol / k\n"
         "  nm4              nu_k = ||g_k||^2 / (||g_0||^2 k)\n"
         "  nm5(sigma,theta) Metropolis-shaped slack; sigma is eps, abs_f0 or a number\n"
         "directions:\n";
  for (const auto& d : known_direction_ids()) out << "  " << d << "\n";
}

// CLI11 only reads config files for the top-level app, so a subcommand's
// --config is applied here. Flags given on the command line win.
void apply_config(CLI::App& sub) {
  const CLI::Option* cfg = sub.get_config_ptr();
  if (cfg == nullptr || cfg->count() == 0) return;
  for (const auto& file : cfg->as<std::vector<std::string>>()) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::Io, "cannot open config file " + file);
    for (const auto& item : CLI::ConfigINI().from_config(in)) {
      if (!item.parents.empty() && item.parents != std::vector<std::string>{sub.get_name()}) continue;
      CLI::Option* opt = sub.get_option_no_throw("--" + item.name);
      if (opt == nullptr) throw Error(ErrorCode::InvalidArgument, file + ": unknown key '" + item.name + "'");
      if (opt->count() > 0) continue;
      // The INI reader splits on commas; single-valued options want them back.
      if (opt->get_items_expected_max() == 1 && item.inputs.size() > 1) {
        opt->add_result(CLI::detail::join(item.inputs, ","));
      } else {
        opt->add_result(item.inputs);
      }
      opt->run_callback();
    }
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-monotone Armijo line search solver, benchmarks and bound audits", "nmls"};
  app.require_subcommand(1);
  RunCmd run_cmd;
  BenchCmd bench_cmd;
  GriewankCmd griewank_cmd;
  VerifyCmd verify_cmd;
  run_cmd.attach(app);
  bench_cmd.attach(app);
  griewank_cmd.attach(app);
  verify_cmd.attach(app);
  auto* lp = app.add_subcommand("list-problems", "Registered problems with known constants");
  auto* lr = app.add_subcommand("list-rules", "Rule and direction ids");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (auto* sub : app.get_subcommands()) apply_config(*sub);
    if (app.got_subcommand("run")) return run_cmd.exec(out);
    if (app.got_subcommand("bench")) return bench_cmd.exec(out);
    if (app.got_subcommand("griewank")) return griewank_cmd.exec(out);
    if (app.got_subcommand("verify")) return verify_cmd.exec(out);
    if (lp->parsed()) list_problems(out);
    if (lr->parsed()) list_rules(out);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace nmls::cli
