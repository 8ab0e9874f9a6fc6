#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nmls {

/// Everything a rule may look at when proposing nu_{k,l}.
struct RuleContext {
  int k = 0;
  int l = 0;
  double f_k = 0.0;
  /// Objective at the current trial point x_k + alpha_k beta^l d_k.
  double f_trial = 0.0;
  double grad_norm_k = 0.0;
  double grad_norm_0 = 0.0;
  /// Accepted values f(x_0), ..., f(x_k); back() == f_k.
  std::span<const double> f_history;
  /// Solver gradient tolerance.
  double eps = 0.0;
};

struct StartContext {
  double f0 = 0.0;
  double grad_norm_0 = 0.0;
  double eps = 0.0;
};

/// Generator of the non-monotone slack nu_{k,l} >= 0.
///
/// propose() is const: a rule's state moves only through start() and
/// on_accept(), which the engine calls once per solve and once per accepted
/// step respectively.
class NuRule {
 public:
  virtual ~NuRule() = default;

  /// Canonical spec string, e.g. "nm5(eps,2)".
  virtual std::string id() const = 0;
  /// Display label used in tables, e.g. "NM5(eps,2)".
  virtual std::string label() const = 0;

  virtual void start(const StartContext& /*ctx*/) {}
  virtual double propose(const RuleContext& ctx) const = 0;
  /// Called after x_{k+1} is accepted; k_new = k + 1.
  virtual void on_accept(int /*k_new*/, double /*f_new*/) {}

  /// Resolved numeric parameters, recorded in traces.
  virtual std::map<std::string, double> parameters() const { return {}; }
};

/// nu = 0: the monotone Armijo rule.
class MonotoneRule final : public NuRule {
 public:
  std::string id() const override { return "m1"; }
  std::string label() const override { return "M1"; }
  double propose(const RuleContext& ctx) const override;
};

/// Max over a sliding window of accepted values minus f_k.
/// Window size follows m(0) = 0, m(k) = min(m(k-1) + 1, capacity).
class WindowMaxRule final : public NuRule {
 public:
  explicit WindowMaxRule(int capacity = 10);

  std::string id() const override { return "nm1"; }
  std::string label() const override { return "NM1"; }
  void start(const StartContext& ctx) override;
  double propose(const RuleContext& ctx) const override;
  void on_accept(int k_new, double f_new) override;
  std::map<std::string, double> parameters() const override;

  int window() const { return m_; }

 private:
  int capacity_;
  int m_ = 0;
};

/// Weighted average reference C_k with Q_k = eta_{k-1} Q_{k-1} + 1,
/// eta_{k-1} = eta_scale / k; nu = C_k - f_k.
class AverageRule final : public NuRule {
 public:
  explicit AverageRule(double eta_scale = 0.85);

  std::string id() const override { return "nm2"; }
  std::string label() const override { return "NM2"; }
  void start(const StartContext& ctx) override;
  double propose(const RuleContext& ctx) const override;
  void on_accept(int k_new, double f_new) override;
  std::map<std::string, double> parameters() const override;

  double c() const { return c_; }
  double q() const { return q_; }

 private:
  double eta_scale_;
  double q_ = 1.0;
  double c_ = 0.0;
};

/// nu_0 = 0, nu_k = eps / k.
class HarmonicRule final : public NuRule {
 public:
  std::string id() const override { return "nm3"; }
  std::string label() const override { return "NM3"; }
  double propose(const RuleContext& ctx) const override;
};

/// nu_0 = 0, nu_k = (||g_k||^2 / ||g_0||^2) / k.
class GradientScaledRule final : public NuRule {
 public:
  std::string id() const override { return "nm4"; }
  std::string label() const override { return "NM4"; }
  double propose(const RuleContext& ctx) const override;
};

/// How the Metropolis rule picks sigma.
struct SigmaSpec {
  enum class Kind { Value, Eps, AbsF0 } kind = Kind::Eps;
  double value = 0.0;

  std::string to_string() const;
};

/// Metropolis-shaped slack: sigma * exp(-max{theta, f_trial - f_k} / tau_k)
/// with tau_k = 1 / ln(k + 1).
class MetropolisRule final : public NuRule {
 public:
  MetropolisRule(SigmaSpec sigma, double theta);

  std::string id() const override;
  std::string label() const override;
  void start(const StartContext& ctx) override;
  double propose(const RuleContext& ctx) const override;
  std::map<std::string, double> parameters() const override;

  double sigma() const { return sigma_; }
  double theta() const { return theta_; }

 private:
  SigmaSpec spec_;
  double sigma_;
  double theta_;
};

/// nu = R_k - f_k for a reference value R_k >= f_k.
/// Throws Error(InvalidReference) when R_k < f_k.
double generic_rk_nu(double reference, double f_k);

/// Adapter for user-supplied reference rules f(x_k) <= R_k <= max window.
class ReferenceRule final : public NuRule {
 public:
  using ReferenceFn = std::function<double(const RuleContext&)>;

  ReferenceRule(std::string id, ReferenceFn reference);

  std::string id() const override { return id_; }
  std::string label() const override { return id_; }
  double propose(const RuleContext& ctx) const override;

 private:
  std::string id_;
  ReferenceFn reference_;
};

/// Closed-form version of the m(k) recursion: min(k, capacity).
int window_size(int k, int capacity = 10);

/// Parsed rule selector: "m1", "nm1".."nm4", "nm5(sigma,theta)".
struct RuleSpec {
  std::string name;
  SigmaSpec sigma;
  double theta = 2.0;

  /// Canonical string, parseable by parse_rule_spec.
  std::string to_string() const;
  std::string label() const;
};

/// Throws Error(UnknownId) naming the valid ids, or Error(Parse) on malformed parameters.
RuleSpec parse_rule_spec(std::string_view text);
std::unique_ptr<NuRule> make_rule(const RuleSpec& spec);
std::unique_ptr<NuRule> make_rule(std::string_view text);

/// Splits "a,b(c,d),e" on commas outside parentheses.
std::vector<std::string> split_top_level(std::string_view text);

const std::vector<std::string>& known_rule_ids();

}  // namespace nmls
