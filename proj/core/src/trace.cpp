#include "nmls/trace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nmls/engine.hpp"

namespace nmls {

namespace {

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!same(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

void SolverConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) fail("alpha0 must be positive");
  if (!(beta > 0.0 && beta < 1.0)) fail("beta must lie in (0, 1)");
  if (!(rho > 0.0 && rho < 1.0)) fail("rho must lie in (0, 1)");
  if (!(grad_tol > 0.0)) fail("grad_tol must be positive");
  if (k_max < 0) fail("k_max must be non-negative");
  if (l_max < 0) fail("l_max must be non-negative");
  if (!(step_floor > 0.0)) fail("step_floor must be positive");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::GradTolReached: return "GradTolReached";
    case Termination::IterBudgetExhausted: return "IterBudgetExhausted";
    case Termination::LineSearchStalled: return "LineSearchStalled";
    case Termination::NonDescentDirection: return "NonDescentDirection";
  }
  return "Unknown";
}

Termination termination_from_string(std::string_view s) {
  for (auto t : {Termination::GradTolReached, Termination::IterBudgetExhausted,
                 Termination::LineSearchStalled, Termination::NonDescentDirection}) {
    if (to_string(t) == s) return t;
  }
  throw Error(ErrorCode::Parse, "unknown termination '" + std::string(s) + "'");
}

bool operator==(const IterationRecord& a, const IterationRecord& b) {
  return a.k == b.k && same(a.x, b.x) && same(a.f, b.f) && same(a.grad_norm, b.grad_norm) &&
         same(a.alpha_in, b.alpha_in) && a.l_accepted == b.l_accepted && same(a.nu, b.nu) &&
         std::equal(a.trials.begin(), a.trials.end(), b.trials.begin(), b.trials.end(),
                    [](const TrialRecord& s, const TrialRecord& t) {
                      return s.l == t.l && same(s.step, t.step) && same(s.f_trial, t.f_trial) &&
                             same(s.nu_trial, t.nu_trial) && s.accepted == t.accepted;
                    }) &&
         same(a.direction, b.direction) && same(a.direction_dot_grad, b.direction_dot_grad) &&
         same(a.direction_norm, b.direction_norm) && a.direction_reset == b.direction_reset &&
         a.update_applied == b.update_applied && same(a.secant_residual, b.secant_residual);
}

bool operator==(const Trace& a, const Trace& b) {
  return a.config == b.config && a.problem_id == b.problem_id && a.rule_id == b.rule_id &&
         a.direction_id == b.direction_id && a.rule_params == b.rule_params &&
         a.records == b.records && a.termination == b.termination &&
         a.total_f_evals == b.total_f_evals && a.total_grad_evals == b.total_grad_evals &&
         same(a.final_x, b.final_x) && same(a.final_f, b.final_f) &&
         same(a.final_grad_norm, b.final_grad_norm) && a.aborted_trials == b.aborted_trials;
}

std::vector<double> Trace::nus() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.nu);
  return out;
}

std::vector<double> Trace::grad_norms() const {
  std::vector<double> out;
  out.reserve(records.size() + 1);
  for (const auto& r : records) out.push_back(r.grad_norm);
  out.push_back(final_grad_norm);
  return out;
}

std::vector<double> Trace::alphas() const {
  std::vector<double> out;
  out.reserve(records.size() + 1);
  if (records.empty()) {
    out.push_back(config.alpha0);
    return out;
  }
  for (const auto& r : records) out.push_back(r.alpha_in);
  const auto& last = records.back();
  out.push_back(next_alpha(last.alpha_in, config.beta, last.l_accepted));
  return out;
}

double Trace::best_f(bool include_trials) const {
  double best = final_f;
  for (const auto& r : records) {
    best = std::min(best, r.f);
    if (include_trials) {
      for (const auto& t : r.trials) {
        if (!std::isnan(t.f_trial)) best = std::min(best, t.f_trial);
      }
    }
  }
  if (include_trials) {
    for (const auto& t : aborted_trials) {
      if (!std::isnan(t.f_trial)) best = std::min(best, t.f_trial);
    }
  }
  return best;
}

}  // namespace nmls
