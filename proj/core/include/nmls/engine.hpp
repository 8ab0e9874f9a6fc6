#pragma once

#include <functional>
#include <vector>

#include "nmls/directions.hpp"
#include "nmls/problems.hpp"
#include "nmls/rules.hpp"
#include "nmls/trace.hpp"
#include "nmls/types.hpp"

namespace nmls {

/// Relaxed Armijo test f_trial <= f_k + rho * step * <g, d> + nu.
/// The engine and every replay use this one function so decisions reproduce bitwise.
bool armijo_holds(double f_trial, double f_k, double rho, double step, double dir_dot_grad,
                  double nu);

/// alpha * beta^l.
double trial_step(double alpha, double beta, int l);

/// alpha_{k+1} = alpha_k * beta^(l_k - 1).
double next_alpha(double alpha, double beta, int l_accepted);

struct BacktrackResult {
  bool stalled = false;
  int l = 0;
  double nu = 0.0;
  Vector x_next;
  double f_next = 0.0;
  std::vector<TrialRecord> trials;
};

/// One line search. Exactly one objective evaluation per probed l; the rule
/// sees each trial value through ctx.f_trial. `ctx` supplies k, f_k, the
/// history and gradient norms; l and f_trial are filled in here.
BacktrackResult backtrack(const std::function<double(const Vector&)>& objective, const Vector& x_k,
                          double f_k, double dir_dot_grad, const Vector& d_k, double alpha_k,
                          const NuRule& rule, RuleContext ctx, const SolverConfig& cfg);

/// Runs the non-monotone descent loop from x0 and records everything.
/// Throws Error(DimensionMismatch) or Error(InvalidArgument) on bad inputs.
Trace solve(const Problem& problem, const Vector& x0, NuRule& rule, DirectionStrategy& direction,
            const SolverConfig& cfg = {});

}  // namespace nmls
