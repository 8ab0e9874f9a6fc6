#include "nmls/engine.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace nmls {

bool armijo_holds(double f_trial, double f_k, double rho, double step, double dir_dot_grad,
                  double nu) {
  const double rhs = f_k + rho * step * dir_dot_grad + nu;
  return f_trial <= rhs;
}

double trial_step(double alpha, double beta, int l) { return alpha * std::pow(beta, l); }

double next_alpha(double alpha, double beta, int l_accepted) {
  return alpha * std::pow(beta, l_accepted - 1);
}

BacktrackResult backtrack(const std::function<double(const Vector&)>& objective, const Vector& x_k,
                          double f_k, double dir_dot_grad, const Vector& d_k, double alpha_k,
                          const NuRule& rule, RuleContext ctx, const SolverConfig& cfg) {
  BacktrackResult out;
  for (int l = 0; l <= cfg.l_max; ++l) {
    const double step = trial_step(alpha_k, cfg.beta, l);
    if (!(step >= cfg.step_floor)) break;

    Vector x_trial = x_k + step * d_k;
    const double f_trial = objective(x_trial);

    ctx.l = l;
    ctx.f_trial = f_trial;
    const double nu = rule.propose(ctx);
    if (!(nu >= 0.0)) {
      throw Error(ErrorCode::InvalidReference,
                  "rule " + rule.id() + " proposed a negative slack at k=" + std::to_string(ctx.k));
    }

    const bool ok = armijo_holds(f_trial, f_k, cfg.rho, step, dir_dot_grad, nu);
    out.trials.push_back({l, step, f_trial, nu, ok});
    if (ok) {
      out.l = l;
      out.nu = nu;
      out.x_next = std::move(x_trial);
      out.f_next = f_trial;
      return out;
    }
  }
  out.stalled = true;
  return out;
}

Trace solve(const Problem& problem, const Vector& x0, NuRule& rule, DirectionStrategy& direction,
            const SolverConfig& cfg) {
  cfg.validate();
  if (x0.size() < 1 || x0.size() != problem.dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "start point has dimension " + std::to_string(x0.size()) + ", problem " +
                    problem.id + " expects " + std::to_string(problem.dim));
  }
  if (!all_finite(x0)) throw Error(ErrorCode::InvalidArgument, "start point is not finite");

  Trace trace;
  trace.config = cfg;
  trace.problem_id = problem.id;
  trace.direction_id = direction.id();

  Vector x = x0;
  double f = problem.value(x);
  Vector g = problem.gradient(x);
  trace.total_f_evals = 1;
  trace.total_grad_evals = 1;
  if (!std::isfinite(f) || !all_finite(g)) {
    throw Error(ErrorCode::InvalidArgument, "objective or gradient not finite at the start point");
  }

  const double grad_norm_0 = g.norm();
  rule.start({f, grad_norm_0, cfg.grad_tol});
  trace.rule_id = rule.id();
  trace.rule_params = rule.parameters();
  direction.start(x, g);

  std::vector<double> f_history{f};
  double alpha = cfg.alpha0;

  for (int k = 0;; ++k) {
    const double grad_norm = g.norm();
    if (grad_norm <= cfg.grad_tol) {
      trace.termination = Termination::GradTolReached;
      break;
    }
    if (k >= cfg.k_max) {
      trace.termination = Termination::IterBudgetExhausted;
      break;
    }

    DirectionResult dir = direction.direction(g);
    const double gd = g.dot(dir.d);
    if (!(gd < 0.0) || !all_finite(dir.d)) {
      trace.termination = Termination::NonDescentDirection;
      break;
    }

    RuleContext ctx;
    ctx.k = k;
    ctx.f_k = f;
    ctx.grad_norm_k = grad_norm;
    ctx.grad_norm_0 = grad_norm_0;
    ctx.f_history = f_history;
    ctx.eps = cfg.grad_tol;

    BacktrackResult ls = backtrack(problem.value, x, f, gd, dir.d, alpha, rule, ctx, cfg);
    trace.total_f_evals += ls.trials.size();
    if (ls.stalled) {
      trace.aborted_trials = std::move(ls.trials);
      trace.termination = Termination::LineSearchStalled;
      break;
    }

    IterationRecord rec;
    rec.k = k;
    rec.x = x;
    rec.f = f;
    rec.grad_norm = grad_norm;
    rec.alpha_in = alpha;
    rec.l_accepted = ls.l;
    rec.nu = ls.nu;
    rec.trials = std::move(ls.trials);
    rec.direction_dot_grad = gd;
    rec.direction_norm = dir.d.norm();
    rec.direction = std::move(dir.d);
    rec.direction_reset = dir.reset;

    x = std::move(ls.x_next);
    f = ls.f_next;
    g = problem.gradient(x);
    ++trace.total_grad_evals;
    f_history.push_back(f);
    rule.on_accept(k + 1, f);

    const UpdateInfo upd = direction.update(x, g);
    rec.update_applied = upd.applied;
    rec.secant_residual = upd.secant_residual;
    trace.records.push_back(std::move(rec));

    alpha = next_alpha(alpha, cfg.beta, ls.l);

    if (!all_finite(g)) {
      trace.termination = Termination::NonDescentDirection;
      break;
    }
  }

  trace.final_x = x;
  trace.final_f = f;
  trace.final_grad_norm = g.norm();
  return trace;
}

}  // namespace nmls
