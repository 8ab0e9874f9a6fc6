#include "nmls/rules.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "format.hpp"
#include "nmls/types.hpp"

namespace nmls {

double MonotoneRule::propose(const RuleContext&) const { return 0.0; }

WindowMaxRule::WindowMaxRule(int capacity) : capacity_(capacity) {
  if (capacity < 0) throw Error(ErrorCode::InvalidArgument, "window capacity must be >= 0");
}

void WindowMaxRule::start(const StartContext&) { m_ = 0; }

double WindowMaxRule::propose(const RuleContext& ctx) const {
  const auto n = static_cast<int>(ctx.f_history.size());
  const int m = std::min(m_, n - 1);
  const auto window = ctx.f_history.subspan(static_cast<std::size_t>(n - 1 - m));
  const double ref = *std::max_element(window.begin(), window.end());
  return ref - ctx.f_k;
}

void WindowMaxRule::on_accept(int, double) { m_ = std::min(m_ + 1, capacity_); }

std::map<std::string, double> WindowMaxRule::parameters() const {
  return {{"capacity", static_cast<double>(capacity_)}};
}

int window_size(int k, int capacity) { return std::min(k, capacity); }

AverageRule::AverageRule(double eta_scale) : eta_scale_(eta_scale) {
  if (!(eta_scale >= 0.0)) throw Error(ErrorCode::InvalidArgument, "eta scale must be >= 0");
}

void AverageRule::start(const StartContext& ctx) {
  q_ = 1.0;
  c_ = ctx.f0;
}

double AverageRule::propose(const RuleContext& ctx) const {
  // C_k >= f_k holds in exact arithmetic; clamp away a rounding-level negative.
  return std::max(0.0, c_ - ctx.f_k);
}

void AverageRule::on_accept(int k_new, double f_new) {
  const double eta = eta_scale_ / k_new;
  const double q_new = eta * q_ + 1.0;
  c_ = (eta * q_ * c_ + f_new) / q_new;
  q_ = q_new;
}

std::map<std::string, double> AverageRule::parameters() const { return {{"eta", eta_scale_}}; }

double HarmonicRule::propose(const RuleContext& ctx) const {
  if (ctx.k == 0) return 0.0;
  return ctx.eps / ctx.k;
}

double GradientScaledRule::propose(const RuleContext& ctx) const {
  if (ctx.grad_norm_0 == 0.0) {
    throw Error(ErrorCode::DegenerateStart, "nm4 needs a non-zero initial gradient");
  }
  if (ctx.k == 0) return 0.0;
  const double ratio = ctx.grad_norm_k / ctx.grad_norm_0;
  return ratio * ratio / ctx.k;
}

std::string SigmaSpec::to_string() const {
  switch (kind) {
    case Kind::Eps: return "eps";
    case Kind::AbsF0: return "abs_f0";
    case Kind::Value: return detail::shortest(value);
  }
  return "eps";
}

MetropolisRule::MetropolisRule(SigmaSpec sigma, double theta)
    : spec_(sigma), sigma_(sigma.kind == SigmaSpec::Kind::Value ? sigma.value : 0.0), theta_(theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw Error(ErrorCode::InvalidArgument, "nm5 theta must be positive");
  }
  if (sigma.kind == SigmaSpec::Kind::Value && !(sigma.value > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "nm5 sigma must be positive");
  }
}

std::string MetropolisRule::id() const {
  return "nm5(" + spec_.to_string() + "," + detail::shortest(theta_) + ")";
}

std::string MetropolisRule::label() const {
  return "NM5(" + spec_.to_string() + "," + detail::shortest(theta_) + ")";
}

void MetropolisRule::start(const StartContext& ctx) {
  switch (spec_.kind) {
    case SigmaSpec::Kind::Eps: sigma_ = ctx.eps; break;
    case SigmaSpec::Kind::AbsF0: sigma_ = std::abs(ctx.f0); break;
    case SigmaSpec::Kind::Value: sigma_ = spec_.value; break;
  }
}

double MetropolisRule::propose(const RuleContext& ctx) const {
  // exp(-max{theta, df} * ln(k+1)) written as a power of (k+1): k = 0 gives
  // exactly sigma, and max{...} = theta reproduces sigma (k+1)^-theta bit for bit.
  // A NaN trial value falls back to theta.
  const double exponent = std::max(theta_, ctx.f_trial - ctx.f_k);
  return sigma_ * std::pow(static_cast<double>(ctx.k) + 1.0, -exponent);
}

std::map<std::string, double> MetropolisRule::parameters() const {
  return {{"sigma", sigma_}, {"theta", theta_}};
}

double generic_rk_nu(double reference, double f_k) {
  if (!(reference >= f_k)) {
    throw Error(ErrorCode::InvalidReference, "reference value " + detail::shortest(reference) +
                                                 " is below f_k = " + detail::shortest(f_k));
  }
  return reference - f_k;
}

ReferenceRule::ReferenceRule(std::string id, ReferenceFn reference)
    : id_(std::move(id)), reference_(std::move(reference)) {}

double ReferenceRule::propose(const RuleContext& ctx) const {
  return generic_rk_nu(reference_(ctx), ctx.f_k);
}

const std::vector<std::string>& known_rule_ids() {
  static const std::vector<std::string> ids{"m1", "nm1", "nm2", "nm3", "nm4", "nm5(sigma,theta)"};
  return ids;
}

std::vector<std::string> split_top_level(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

namespace {

std::string lower(std::string_view s) {
  std::string out;
  for (char ch : s) {
    if (!std::isspace(static_cast<unsigned char>(ch))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  return out;
}

double parse_number(const std::string& s, std::string_view context) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Parse, "cannot parse '" + s + "' in " + std::string(context));
  }
  return v;
}

[[noreturn]] void unknown_rule(std::string_view text) {
  std::string msg = "unknown rule '" + std::string(text) + "'; valid ids:";
  for (const auto& id : known_rule_ids()) msg += " " + id;
  throw Error(ErrorCode::UnknownId, msg);
}

}  // namespace

std::string RuleSpec::to_string() const {
  if (name != "nm5") return name;
  return "nm5(" + sigma.to_string() + "," + detail::shortest(theta) + ")";
}

std::string RuleSpec::label() const {
  if (name != "nm5") {
    std::string up = name;
    for (char& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return up;
  }
  return "NM5(" + sigma.to_string() + "," + detail::shortest(theta) + ")";
}

RuleSpec parse_rule_spec(std::string_view text) {
  const std::string s = lower(text);
  RuleSpec spec;
  if (s == "m1" || s == "nm1" || s == "nm2" || s == "nm3" || s == "nm4") {
    spec.name = s;
    return spec;
  }
  if (s == "nm5") {
    spec.name = "nm5";
    return spec;
  }
  if (s.rfind("nm5(", 0) != 0 || s.back() != ')') unknown_rule(text);

  const auto args = split_top_level(std::string_view(s).substr(4, s.size() - 5));
  if (args.size() != 2) {
    throw Error(ErrorCode::Parse, "nm5 takes two parameters (sigma,theta): '" + std::string(text) + "'");
  }
  spec.name = "nm5";
  if (args[0] == "eps") {
    spec.sigma.kind = SigmaSpec::Kind::Eps;
  } else if (args[0] == "abs_f0") {
    spec.sigma.kind = SigmaSpec::Kind::AbsF0;
  } else {
    spec.sigma.kind = SigmaSpec::Kind::Value;
    spec.sigma.value = parse_number(args[0], "nm5 sigma");
    if (!(spec.sigma.value > 0.0)) throw Error(ErrorCode::Parse, "nm5 sigma must be positive");
  }
  spec.theta = parse_number(args[1], "nm5 theta");
  if (!(spec.theta > 0.0)) throw Error(ErrorCode::Parse, "nm5 theta must be positive");
  return spec;
}

std::unique_ptr<NuRule> make_rule(const RuleSpec& spec) {
  if (spec.name == "m1") return std::make_unique<MonotoneRule>();
  if (spec.name == "nm1") return std::make_unique<WindowMaxRule>(10);
  if (spec.name == "nm2") return std::make_unique<AverageRule>(0.85);
  if (spec.name == "nm3") return std::make_unique<HarmonicRule>();
  if (spec.name == "nm4") return std::make_unique<GradientScaledRule>();
  if (spec.name == "nm5") return std::make_unique<MetropolisRule>(spec.sigma, spec.theta);
  unknown_rule(spec.name);
}

std::unique_ptr<NuRule> make_rule(std::string_view text) { return make_rule(parse_rule_spec(text)); }

}  // namespace nmls
