#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nmls/trace.hpp"

namespace nmls {

/// Constants entering the complexity bounds. c1, c2 are the descent-quality
/// constants (<g,d> <= -c1||g||^2, ||d|| <= c2||g||), L the gradient Lipschitz constant.
struct Constants {
  double alpha0 = 1.0;
  double beta = 0.5;
  double rho = 0.5;
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<double> L;
  double f0 = 0.0;
  std::optional<double> f_low;

  bool has_descent_constants() const { return c1 && c2 && L; }

  /// alpha0/beta/rho/f0 from the trace; the optional fields as given.
  static Constants from_trace(const Trace& trace, std::optional<double> L = {},
                              std::optional<double> c1 = {}, std::optional<double> c2 = {},
                              std::optional<double> f_low = {});
};

/// Iteration threshold both as a real and rounded up.
struct Threshold {
  double exact = 0.0;
  std::int64_t value = 0;
};

Threshold make_threshold(double exact);

/// min{rho beta alpha0 c1, 2 beta rho (1 - rho) c1^2 / (L c2^2)}.
/// Throws Error(InsufficientConstants) when c1, c2 or L is missing.
double kappa_c(const Constants& c);

/// Step-size floor min{alpha0, 2 (1 - rho) c1 / (L c2^2)}.
double alpha_bar(const Constants& c);

/// Bound on function evaluations after k iterations:
/// 2(k + 1) + (log alpha_bar - log alpha0) / log beta.
double nk_bound(std::int64_t k, double alpha0, double alpha_bar_value, double beta);
double nk_bound(std::int64_t k, const Constants& c);

/// Summable slack with total S: T >= 2 max{S, f0 - f_low} / (kappa eps^2).
Threshold t_threshold_summable(double S, double kappa, double gap, double eps);
Threshold t_threshold_summable(double S, const Constants& c, double eps);

/// Slack bounded by C and below delta from k0(delta) on:
/// max{2 k0(delta/2) C / delta, 1 + k0(delta/2), 2 gap / (kappa eps^2)}, delta = kappa eps^2 / 2.
Threshold t_threshold_general(const std::function<double(double)>& k0, double C, double kappa,
                              double gap, double eps);

/// nu_k = M / k: max{16 M^2 / (kappa^2 eps^4), 1 + 4M / (kappa eps^2), 2 gap / (kappa eps^2)}.
Threshold t_threshold_decaying(double M, double kappa, double gap, double eps);
Threshold t_threshold_decaying(double M, const Constants& c, double eps);

/// sigma * sum_{k>=0} (k+1)^-theta for theta > 1.
double metropolis_sum(double sigma, double theta);

/// Metropolis slack. theta > 1 uses the summable threshold with metropolis_sum;
/// theta in (0, 1] uses
/// max{(4/kappa)^((1+theta)/theta) sigma^(1/theta), 1 + (4 sigma/kappa)^(1/theta), 2 gap/kappa}
///   * eps^(-2(1+theta)/theta).
Threshold t_threshold_metropolis(double sigma, double theta, double kappa, double gap, double eps);

/// (1/T) sum_{k<T} nu_k. Throws Error(InvalidArgument) if T is 0 or exceeds nus.size().
double cesaro_average(std::span<const double> nus, std::size_t T);

/// |{k : ||grad f(x_k)|| > eps}| over x_0..x_K (final point included).
std::int64_t omega_count(const Trace& trace, double eps);

/// k1 + 2 (f0 - f_low + sum_{i<k1} nu_i) / (kappa eps^2) with the recorded nu.
double omega_bound(const Trace& trace, double kappa, double f_low, std::int64_t k1, double eps);

/// Smallest k1 with gamma_k ||g_k||^2 <= (kappa/2) ||g_k||^2 for all k >= k1 under
/// gamma_k = 1 / (||g_0||^2 k): ceil(2 / (kappa ||g_0||^2)), or 0 when that is <= 1.
std::int64_t nm4_k1(double kappa, double grad_norm_0);

/// Smallest n such that every recorded k >= n has nu_k <= (kappa/2) ||g_k||^2.
std::int64_t observed_k1(const Trace& trace, double kappa);

/// min_{k<T} ||grad f(x_k)||; points past the trace end are ignored.
double min_grad_within(const Trace& trace, std::int64_t T);

struct Verdict {
  std::string name;
  /// The bound being checked, in words.
  std::string checks;
  bool passed = true;
  std::string detail;
};

struct ThresholdProbe {
  double eps = 0.0;
  Threshold threshold;
  double min_grad = 0.0;
  /// The trace reached T iterations or converged before it.
  bool applicable = false;
};

struct BoundReport {
  std::string problem_id;
  std::string rule_id;
  std::string direction_id;
  bool insufficient_constants = false;
  std::optional<double> kappa_c;
  std::optional<double> alpha_bar;
  /// Floor used by the evaluation-count bound (alpha_bar, or min observed alpha).
  double alpha_floor_used = 0.0;
  std::int64_t iterations = 0;
  std::int64_t f_evals = 0;
  double min_alpha = 0.0;
  double min_grad_norm = 0.0;
  double sum_nu = 0.0;
  std::vector<ThresholdProbe> probes;
  std::vector<Verdict> verdicts;

  bool passed() const;
  const Verdict* find(const std::string& name) const;
};

/// Slack on inequalities that are exact in real arithmetic, scaled by max(1, |operands|).
inline constexpr double kAuditSlack = 1e-12;

/// Audits a trace. Always: Armijo replay, nu >= 0, step recursion, evaluation
/// accounting, descent, evaluation-count bound and rule envelopes. With c1, c2
/// and L: step floor, descent constants, per-iteration decrease. With f_low
/// as well: gradient thresholds, partial-sum bound, Omega count (nm4).
BoundReport audit(const Trace& trace, const Constants& c);

std::string to_json(const BoundReport& report);
std::string to_table(const BoundReport& report);

}  // namespace nmls
