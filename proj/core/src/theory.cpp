#include "nmls/theory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "format.hpp"
#include "nmls/engine.hpp"
#include "nmls/rules.hpp"

namespace nmls {

namespace {

void need_descent_constants(const Constants& c) {
  if (!c.has_descent_constants()) {
    throw Error(ErrorCode::InsufficientConstants, "L, c1 and c2 are required");
  }
}

// a <= b up to kAuditSlack, scaled by the magnitudes once they exceed 1.
bool le(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return a <= b + kAuditSlack * scale;
}

std::string fmt(double v) { return detail::shortest(v); }

bool starts_with(const std::string& s, std::string_view prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

}  // namespace

Constants Constants::from_trace(const Trace& trace, std::optional<double> L, std::optional<double> c1,
                                std::optional<double> c2, std::optional<double> f_low) {
  Constants c;
  c.alpha0 = trace.config.alpha0;
  c.beta = trace.config.beta;
  c.rho = trace.config.rho;
  c.c1 = c1;
  c.c2 = c2;
  c.L = L;
  c.f0 = trace.initial_f();
  c.f_low = f_low;
  return c;
}

Threshold make_threshold(double exact) {
  Threshold t;
  t.exact = exact;
  // Thresholds past the int64 range saturate; no trace gets that long anyway.
  constexpr double kCap = 9.2e18;
  t.value = std::isfinite(exact) && std::ceil(exact) < kCap ? static_cast<std::int64_t>(std::ceil(exact))
                                                            : std::numeric_limits<std::int64_t>::max();
  return t;
}

double kappa_c(const Constants& c) {
  need_descent_constants(c);
  const double c1 = *c.c1, c2 = *c.c2, L = *c.L;
  return std::min(c.rho * c.beta * c.alpha0 * c1,
                  2.0 * c.beta * c.rho * (1.0 - c.rho) * c1 * c1 / (L * c2 * c2));
}

double alpha_bar(const Constants& c) {
  need_descent_constants(c);
  return std::min(c.alpha0, 2.0 * (1.0 - c.rho) * *c.c1 / (*c.L * *c.c2 * *c.c2));
}

double nk_bound(std::int64_t k, double alpha0, double alpha_bar_value, double beta) {
  return 2.0 * static_cast<double>(k + 1) +
         (std::log(alpha_bar_value) - std::log(alpha0)) / std::log(beta);
}

double nk_bound(std::int64_t k, const Constants& c) { return nk_bound(k, c.alpha0, alpha_bar(c), c.beta); }

Threshold t_threshold_summable(double S, double kappa, double gap, double eps) {
  return make_threshold(2.0 * std::max(S, gap) / (kappa * eps * eps));
}

Threshold t_threshold_summable(double S, const Constants& c, double eps) {
  if (!c.f_low) throw Error(ErrorCode::InsufficientConstants, "f_low is required");
  return t_threshold_summable(S, kappa_c(c), c.f0 - *c.f_low, eps);
}

Threshold t_threshold_general(const std::function<double(double)>& k0, double C, double kappa,
                              double gap, double eps) {
  const double delta = kappa * eps * eps / 2.0;
  const double k0v = k0(delta / 2.0);
  return make_threshold(
      std::max({2.0 * k0v * C / delta, 1.0 + k0v, 2.0 * gap / (kappa * eps * eps)}));
}

Threshold t_threshold_decaying(double M, double kappa, double gap, double eps) {
  const double e2 = eps * eps;
  return make_threshold(std::max({16.0 * M * M / (kappa * kappa * e2 * e2), 1.0 + 4.0 * M / (kappa * e2),
                                  2.0 * gap / (kappa * e2)}));
}

Threshold t_threshold_decaying(double M, const Constants& c, double eps) {
  if (!c.f_low) throw Error(ErrorCode::InsufficientConstants, "f_low is required");
  return t_threshold_decaying(M, kappa_c(c), c.f0 - *c.f_low, eps);
}

double metropolis_sum(double sigma, double theta) {
  if (!(theta > 1.0)) return std::numeric_limits<double>::infinity();
  return sigma * std::riemann_zeta(theta);
}

Threshold t_threshold_metropolis(double sigma, double theta, double kappa, double gap, double eps) {
  if (theta > 1.0) return t_threshold_summable(metropolis_sum(sigma, theta), kappa, gap, eps);
  const double a = std::pow(4.0 / kappa, (1.0 + theta) / theta) * std::pow(sigma, 1.0 / theta);
  const double b = 1.0 + std::pow(4.0 * sigma / kappa, 1.0 / theta);
  const double c = 2.0 * gap / kappa;
  return make_threshold(std::max({a, b, c}) * std::pow(eps, -2.0 * (1.0 + theta) / theta));
}

double cesaro_average(std::span<const double> nus, std::size_t T) {
  if (T == 0 || T > nus.size()) {
    throw Error(ErrorCode::InvalidArgument, "cesaro_average needs 1 <= T <= number of terms");
  }
  return std::accumulate(nus.begin(), nus.begin() + static_cast<std::ptrdiff_t>(T), 0.0) /
         static_cast<double>(T);
}

std::int64_t omega_count(const Trace& trace, double eps) {
  const auto norms = trace.grad_norms();
  return std::count_if(norms.begin(), norms.end(), [eps](double g) { return g > eps; });
}

double omega_bound(const Trace& trace, double kappa, double f_low, std::int64_t k1, double eps) {
  double partial = 0.0;
  for (std::int64_t i = 0; i < k1 && i < static_cast<std::int64_t>(trace.records.size()); ++i) {
    partial += trace.records[static_cast<std::size_t>(i)].nu;
  }
  return static_cast<double>(k1) + 2.0 * (trace.initial_f() - f_low + partial) / (kappa * eps * eps);
}

std::int64_t nm4_k1(double kappa, double grad_norm_0) {
  const double x = 2.0 / (kappa * grad_norm_0 * grad_norm_0);
  const auto k = static_cast<std::int64_t>(std::ceil(x));
  // nu_0 = 0 always satisfies the inequality, so a threshold of 1 collapses to 0.
  return k <= 1 ? 0 : k;
}

std::int64_t observed_k1(const Trace& trace, double kappa) {
  std::int64_t k1 = 0;
  for (const auto& r : trace.records) {
    if (!(r.nu <= kappa / 2.0 * r.grad_norm * r.grad_norm)) k1 = r.k + 1;
  }
  return k1;
}

double min_grad_within(const Trace& trace, std::int64_t T) {
  const auto norms = trace.grad_norms();
  const auto n = std::min<std::int64_t>(T, static_cast<std::int64_t>(norms.size()));
  if (n <= 0) return std::numeric_limits<double>::infinity();
  return *std::min_element(norms.begin(), norms.begin() + n);
}

bool BoundReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

const Verdict* BoundReport::find(const std::string& name) const {
  for (const auto& v : verdicts) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

namespace {

// Collects the first failure per verdict.
class Check {
 public:
  Check(std::string name, std::string checks) : v_{std::move(name), std::move(checks), true, {}} {}

  void expect(bool ok, const std::string& detail) {
    if (!ok && v_.passed) {
      v_.passed = false;
      v_.detail = detail;
    }
  }

  Verdict done(std::string ok_detail = {}) {
    if (v_.passed) v_.detail = std::move(ok_detail);
    return std::move(v_);
  }

 private:
  Verdict v_;
};

std::string at(std::size_t k) { return "k=" + std::to_string(k) + ": "; }

Threshold rule_threshold(const Trace& trace, double kappa, double gap, double eps) {
  const auto& id = trace.rule_id;
  const auto nus = trace.nus();
  const double observed_sum = std::accumulate(nus.begin(), nus.end(), 0.0);
  if (id == "m1") return t_threshold_summable(0.0, kappa, gap, eps);
  if (id == "nm3") return t_threshold_decaying(trace.config.grad_tol, kappa, gap, eps);
  if (id == "nm4") {
    const double g0 = trace.initial_grad_norm();
    double M = 0.0;
    for (double g : trace.grad_norms()) M = std::max(M, (g * g) / (g0 * g0));
    return t_threshold_decaying(M, kappa, gap, eps);
  }
  if (starts_with(id, "nm5") && trace.rule_params.count("sigma") && trace.rule_params.count("theta")) {
    return t_threshold_metropolis(trace.rule_params.at("sigma"), trace.rule_params.at("theta"), kappa,
                                  gap, eps);
  }
  // No closed form: the recorded partial sum stands in for the total.
  return t_threshold_summable(observed_sum, kappa, gap, eps);
}

}  // namespace

BoundReport audit(const Trace& trace, const Constants& c) {
  BoundReport rep;
  rep.problem_id = trace.problem_id;
  rep.rule_id = trace.rule_id;
  rep.direction_id = trace.direction_id;
  rep.iterations = static_cast<std::int64_t>(trace.records.size());
  rep.f_evals = static_cast<std::int64_t>(trace.total_f_evals);

  const auto& cfg = trace.config;
  const auto& recs = trace.records;
  const auto alphas = trace.alphas();
  const auto norms = trace.grad_norms();
  const auto nus = trace.nus();
  rep.min_alpha = *std::min_element(alphas.begin(), alphas.end());
  rep.min_grad_norm = *std::min_element(norms.begin(), norms.end());
  rep.sum_nu = std::accumulate(nus.begin(), nus.end(), 0.0);

  // Armijo replay from the recorded numbers, through the engine's own test.
  {
    Check chk("armijo-replay",
              "accepted trial satisfies f(x+s d) <= f(x) + rho s <g,d> + nu; every earlier trial violates it");
    for (std::size_t k = 0; k < recs.size(); ++k) {
      const auto& r = recs[k];
      chk.expect(!r.trials.empty(), at(k) + "no trials recorded");
      for (std::size_t i = 0; i < r.trials.size(); ++i) {
        const auto& t = r.trials[i];
        const bool last = i + 1 == r.trials.size();
        const bool replay = armijo_holds(t.f_trial, r.f, cfg.rho, t.step, r.direction_dot_grad, t.nu_trial);
        chk.expect(t.l == static_cast<int>(i), at(k) + "trial indices are not 0,1,2,...");
        chk.expect(t.step == trial_step(r.alpha_in, cfg.beta, t.l), at(k) + "trial step differs from alpha beta^l");
        chk.expect(replay == t.accepted, at(k) + "decision at l=" + std::to_string(t.l) + " does not replay");
        chk.expect(t.accepted == last, at(k) + "accepted trial is not the last one probed");
      }
      if (!r.trials.empty()) {
        const auto& acc = r.trials.back();
        chk.expect(acc.l == r.l_accepted, at(k) + "l_k differs from the accepted trial");
        chk.expect(acc.nu_trial == r.nu, at(k) + "nu_k differs from the accepted trial's nu");
        const double f_next = k + 1 < recs.size() ? recs[k + 1].f : trace.final_f;
        chk.expect(acc.f_trial == f_next, at(k) + "f(x_{k+1}) differs from the accepted trial value");
      }
    }
    for (const auto& t : trace.aborted_trials) {
      chk.expect(!t.accepted, "aborted line search contains an accepted trial");
    }
    rep.verdicts.push_back(chk.done());
  }

  {
    Check chk("nu-nonnegative", "nu_{k,l} >= 0 for every trial");
    for (std::size_t k = 0; k < recs.size(); ++k) {
      for (const auto& t : recs[k].trials) {
        chk.expect(t.nu_trial >= 0.0, at(k) + "nu=" + fmt(t.nu_trial) + " at l=" + std::to_string(t.l));
      }
    }
    rep.verdicts.push_back(chk.done());
  }

  {
    Check chk("step-recursion", "alpha_0 = configured alpha0 and alpha_{k+1} = alpha_k beta^(l_k - 1)");
    if (!recs.empty()) chk.expect(recs.front().alpha_in == cfg.alpha0, "alpha_0 differs from configuration");
    for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
      chk.expect(recs[k + 1].alpha_in == next_alpha(recs[k].alpha_in, cfg.beta, recs[k].l_accepted),
                 at(k) + "alpha_{k+1} breaks the recursion");
    }
    rep.verdicts.push_back(chk.done());
  }

  {
    Check chk("eval-accounting", "total f evaluations = 1 + sum_k (l_k + 1) + aborted trials");
    std::size_t n = 1 + trace.aborted_trials.size();
    for (const auto& r : recs) {
      n += r.trials.size();
      chk.expect(r.trials.size() == static_cast<std::size_t>(r.l_accepted) + 1,
                 at(static_cast<std::size_t>(r.k)) + "trial count differs from l_k + 1");
    }
    chk.expect(n == trace.total_f_evals,
               "counted " + std::to_string(n) + ", recorded " + std::to_string(trace.total_f_evals));
    rep.verdicts.push_back(chk.done());
  }

  {
    Check chk("descent", "<grad f(x_k), d_k> < 0");
    for (std::size_t k = 0; k < recs.size(); ++k) {
      chk.expect(recs[k].direction_dot_grad < 0.0, at(k) + "<g,d>=" + fmt(recs[k].direction_dot_grad));
    }
    rep.verdicts.push_back(chk.done());
  }

  const bool known = c.has_descent_constants();
  rep.insufficient_constants = !known;
  if (known) {
    rep.kappa_c = kappa_c(c);
    rep.alpha_bar = alpha_bar(c);
  }
  rep.alpha_floor_used = known ? *rep.alpha_bar : std::min(rep.min_alpha, c.alpha0);

  {
    Check chk("eval-count-bound", "N_k <= 2(k+1) + (log alpha_floor - log alpha0) / log beta");
    std::int64_t n = 1;
    for (std::size_t k = 0; k <= recs.size(); ++k) {
      const double bound = nk_bound(static_cast<std::int64_t>(k), c.alpha0, rep.alpha_floor_used, c.beta);
      chk.expect(le(static_cast<double>(n), bound),
                 at(k) + "N_k=" + std::to_string(n) + " > " + fmt(bound));
      if (k < recs.size()) n += recs[k].l_accepted + 1;
    }
    rep.verdicts.push_back(chk.done(known ? "alpha_floor = alpha_bar" : "alpha_floor = min observed alpha"));
  }

  if (starts_with(trace.rule_id, "nm5") && trace.rule_params.count("sigma") &&
      trace.rule_params.count("theta")) {
    const double sigma = trace.rule_params.at("sigma");
    const double theta = trace.rule_params.at("theta");
    Check chk("nm5-envelope", "nu_{k,l} <= sigma (k+1)^-theta");
    for (std::size_t k = 0; k < recs.size(); ++k) {
      const double env = sigma * std::pow(static_cast<double>(k) + 1.0, -theta);
      for (const auto& t : recs[k].trials) {
        chk.expect(t.nu_trial <= env + 1e-15, at(k) + "nu=" + fmt(t.nu_trial) + " > " + fmt(env));
      }
    }
    rep.verdicts.push_back(chk.done());
  }

  if (trace.rule_id == "nm3") {
    Check chk("cesaro", "(1/T) sum_{k<T} nu_k <= eps (1 + ln T) / T");
    const double eps = cfg.grad_tol;
    for (std::size_t T = 1; T <= nus.size(); ++T) {
      const double avg = cesaro_average(nus, T);
      const double bound = eps * (1.0 + std::log(static_cast<double>(T))) / static_cast<double>(T);
      chk.expect(avg <= bound + 1e-15, "T=" + std::to_string(T) + ": " + fmt(avg) + " > " + fmt(bound));
    }
    rep.verdicts.push_back(chk.done());
  }

  if (trace.rule_id == "nm1") {
    Check chk("nm1-window", "nu_k = max of the last min(k,10)+1 accepted values - f_k");
    for (std::size_t k = 0; k < recs.size(); ++k) {
      const int m = window_size(static_cast<int>(k), 10);
      double ref = -std::numeric_limits<double>::infinity();
      for (std::size_t j = k - static_cast<std::size_t>(m); j <= k; ++j) ref = std::max(ref, recs[j].f);
      chk.expect(recs[k].nu == ref - recs[k].f, at(k) + "window reference does not reproduce nu_k");
    }
    rep.verdicts.push_back(chk.done());
  }

  if (!known) return rep;

  const double kappa = *rep.kappa_c;

  {
    Check chk("alpha-floor", "alpha_k >= min{alpha0, 2(1-rho)c1/(L c2^2)}");
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      chk.expect(le(*rep.alpha_bar, alphas[k]), at(k) + "alpha=" + fmt(alphas[k]) + " < " + fmt(*rep.alpha_bar));
    }
    rep.verdicts.push_back(chk.done());
  }

  {
    Check chk("descent-constants", "<g,d> <= -c1 ||g||^2 and ||d|| <= c2 ||g||");
    for (std::size_t k = 0; k < recs.size(); ++k) {
      const auto& r = recs[k];
      chk.expect(le(r.direction_dot_grad, -*c.c1 * r.grad_norm * r.grad_norm), at(k) + "<g,d> too large");
      chk.expect(le(r.direction_norm, *c.c2 * r.grad_norm), at(k) + "||d|| too large");
    }
    rep.verdicts.push_back(chk.done());
  }

  {
    Check chk("decrease", "kappa_c ||g_k||^2 <= f(x_k) - f(x_{k+1}) + nu_k");
    for (std::size_t k = 0; k < recs.size(); ++k) {
      const double f_next = k + 1 < recs.size() ? recs[k + 1].f : trace.final_f;
      const double lhs = kappa * recs[k].grad_norm * recs[k].grad_norm;
      const double rhs = recs[k].f - f_next + recs[k].nu;
      chk.expect(le(lhs, rhs), at(k) + fmt(lhs) + " > " + fmt(rhs));
    }
    rep.verdicts.push_back(chk.done());
  }

  if (!c.f_low) return rep;
  const double gap = c.f0 - *c.f_low;

  {
    Check chk("partial-sum", "kappa_c T min_{k<T} ||g_k||^2 <= f(x_0) - f_low + sum_{k<T} nu_k");
    double running_min = std::numeric_limits<double>::infinity();
    double nu_sum = 0.0;
    for (std::size_t T = 1; T <= recs.size(); ++T) {
      running_min = std::min(running_min, recs[T - 1].grad_norm);
      nu_sum += recs[T - 1].nu;
      const double lhs = kappa * static_cast<double>(T) * running_min * running_min;
      chk.expect(le(lhs, gap + nu_sum), "T=" + std::to_string(T) + ": " + fmt(lhs) + " > " + fmt(gap + nu_sum));
    }
    rep.verdicts.push_back(chk.done());
  }

  {
    Check chk("grad-threshold", "min_{k<T(eps)} ||g_k|| <= eps once T(eps) iterations are available");
    const bool converged = trace.termination == Termination::GradTolReached;
    for (double eps : {cfg.grad_tol, 10.0 * cfg.grad_tol, 100.0 * cfg.grad_tol}) {
      ThresholdProbe probe;
      probe.eps = eps;
      probe.threshold = rule_threshold(trace, kappa, gap, eps);
      probe.min_grad = min_grad_within(trace, probe.threshold.value);
      const auto K = static_cast<std::int64_t>(recs.size());
      if (K >= probe.threshold.value) {
        probe.applicable = true;
        chk.expect(probe.min_grad <= eps, "eps=" + fmt(eps) + ": min over T=" +
                                              std::to_string(probe.threshold.value) + " is " + fmt(probe.min_grad));
      } else if (converged) {
        probe.applicable = true;
        probe.min_grad = min_grad_within(trace, K + 1);
        chk.expect(probe.min_grad <= eps, "eps=" + fmt(eps) + ": converged above eps");
      }
      rep.probes.push_back(probe);
    }
    rep.verdicts.push_back(chk.done());
  }

  if (trace.rule_id == "nm4") {
    Check chk("omega-bound", "|{k : ||g_k|| > eps}| <= k1 + 2(f0 - f_low + sum_{i<k1} nu_i) / (kappa_c eps^2)");
    const double eps = cfg.grad_tol;
    const auto k1 = nm4_k1(kappa, trace.initial_grad_norm());
    const auto count = omega_count(trace, eps);
    const double bound = omega_bound(trace, kappa, *c.f_low, k1, eps);
    chk.expect(le(static_cast<double>(count), bound), std::to_string(count) + " > " + fmt(bound));
    rep.verdicts.push_back(chk.done("count=" + std::to_string(count) + " bound=" + fmt(bound) +
                                    " k1=" + std::to_string(k1)));
  }

  return rep;
}

std::string to_json(const BoundReport& r) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) -> json { return v ? json(*v) : json(nullptr); };
  json probes = json::array();
  for (const auto& p : r.probes) {
    probes.push_back({{"eps", p.eps},
                      {"threshold_exact", p.threshold.exact},
                      {"threshold", p.threshold.value},
                      {"min_grad", p.min_grad},
                      {"applicable", p.applicable}});
  }
  json verdicts = json::array();
  for (const auto& v : r.verdicts) {
    verdicts.push_back({{"name", v.name}, {"checks", v.checks}, {"passed", v.passed}, {"detail", v.detail}});
  }
  json out = {
      {"problem_id", r.problem_id},
      {"rule_id", r.rule_id},
      {"direction_id", r.direction_id},
      {"insufficient_constants", r.insufficient_constants},
      {"kappa_c", opt(r.kappa_c)},
      {"alpha_bar", opt(r.alpha_bar)},
      {"alpha_floor_used", r.alpha_floor_used},
      {"observed",
       {{"iterations", r.iterations},
        {"f_evals", r.f_evals},
        {"min_alpha", r.min_alpha},
        {"min_grad_norm", r.min_grad_norm},
        {"sum_nu", r.sum_nu}}},
      {"thresholds", probes},
      {"verdicts", verdicts},
      {"passed", r.passed()},
  };
  return out.dump(2);
}

std::string to_table(const BoundReport& r) {
  std::ostringstream out;
  out << r.problem_id << "  " << r.rule_id << "  " << r.direction_id << "\n";
  out << "  iterations " << r.iterations << ", f evals " << r.f_evals << ", min alpha " << fmt(r.min_alpha)
      << ", min ||g|| " << fmt(r.min_grad_norm) << "\n";
  if (r.kappa_c) out << "  kappa_c " << fmt(*r.kappa_c) << ", alpha_bar " << fmt(*r.alpha_bar) << "\n";
  if (r.insufficient_constants) out << "  (L, c1, c2 unknown: replay and evaluation-count checks only)\n";
  for (const auto& p : r.probes) {
    out << "  eps " << fmt(p.eps) << ": T " << p.threshold.value << ", min ||g|| " << fmt(p.min_grad)
        << (p.applicable ? "" : " (trace too short)") << "\n";
  }
  for (const auto& v : r.verdicts) {
    out << "  " << (v.passed ? "PASS " : "FAIL ") << std::left << std::setw(18) << v.name << " " << v.checks;
    if (!v.detail.empty()) out << "  [" << v.detail << "]";
    out << "\n";
  }
  return out.str();
}

}  // namespace nmls
