#include <cmath>

#include <gtest/gtest.h>

#include <nmls/engine.hpp>

#include "helpers.hpp"

using namespace nmls;
using nmls::testing::square;
using nmls::testing::vec;

namespace {

class ConstantRule final : public NuRule {
 public:
  explicit ConstantRule(double nu) : nu_(nu) {}
  std::string id() const override { return "const"; }
  std::string label() const override { return "CONST"; }
  double propose(const RuleContext&) const override { return nu_; }
  void on_accept(int k_new, double) override { accepts.push_back(k_new); }

  std::vector<int> accepts;

 private:
  double nu_;
};

class UphillDirection final : public DirectionStrategy {
 public:
  std::string id() const override { return "uphill"; }
  void start(const Vector&, const Vector&) override {}
  DirectionResult direction(const Vector& g) override { return {g, false}; }
  UpdateInfo update(const Vector&, const Vector&) override { return {}; }
};

RuleContext ctx_for(double f_k, const std::vector<double>& hist) {
  RuleContext c;
  c.f_k = f_k;
  c.f_history = hist;
  c.grad_norm_k = 2.0;
  c.grad_norm_0 = 2.0;
  c.eps = 1e-5;
  return c;
}

}  // namespace

TEST(Armijo, SharedHelpers) {
  EXPECT_TRUE(armijo_holds(0.0, 1.0, 0.5, 0.5, -2.0, 0.0));
  EXPECT_FALSE(armijo_holds(1.0, 1.0, 0.5, 1.0, -2.0, 0.0));
  EXPECT_EQ(trial_step(1.0, 0.5, 3), 0.125);
  EXPECT_EQ(next_alpha(1.0, 0.5, 0), 2.0);
  EXPECT_EQ(next_alpha(1.0, 0.5, 1), 1.0);
  EXPECT_EQ(next_alpha(1.0, 0.5, 3), 0.25);
}

TEST(Backtrack, SquareMonotoneRejectsThenAccepts) {
  const auto p = square();
  const std::vector<double> hist{1.0};
  MonotoneRule m1;
  const auto r = backtrack(p.value, vec({1.0}), 1.0, -4.0, vec({-2.0}), 1.0, m1, ctx_for(1.0, hist), {});
  ASSERT_FALSE(r.stalled);
  EXPECT_EQ(r.l, 1);
  EXPECT_EQ(r.nu, 0.0);
  EXPECT_EQ(r.x_next[0], 0.0);
  EXPECT_EQ(r.f_next, 0.0);
  ASSERT_EQ(r.trials.size(), 2u);
  EXPECT_EQ(r.trials[0].f_trial, 1.0);
  EXPECT_FALSE(r.trials[0].accepted);
  EXPECT_EQ(r.trials[1].step, 0.5);
  EXPECT_TRUE(r.trials[1].accepted);
}

TEST(Backtrack, LargeSlackAcceptsFirstTrial) {
  const auto p = square();
  const std::vector<double> hist{1.0};
  ConstantRule two(2.0);
  const auto r = backtrack(p.value, vec({1.0}), 1.0, -4.0, vec({-2.0}), 1.0, two, ctx_for(1.0, hist), {});
  EXPECT_EQ(r.l, 0);
  EXPECT_EQ(r.nu, 2.0);
  EXPECT_EQ(r.x_next[0], -1.0);
  EXPECT_EQ(r.f_next, 1.0);
  EXPECT_EQ(r.trials.size(), 1u);
}

TEST(Backtrack, SlackCoveringTheFirstTrialAcceptsAtZero) {
  // nu >= f(x + a d) - f(x) - rho a <g,d> makes l = 0 pass by construction.
  const auto p = square();
  const std::vector<double> hist{9.0};
  const double needed = p.value(vec({3.0 - 6.0})) - 9.0 - 0.5 * 1.0 * (-36.0);
  ConstantRule rule(needed);
  const auto r = backtrack(p.value, vec({3.0}), 9.0, -36.0, vec({-6.0}), 1.0, rule, ctx_for(9.0, hist), {});
  EXPECT_EQ(r.l, 0);
}

TEST(Backtrack, NegativeNuIsRejected) {
  const auto p = square();
  const std::vector<double> hist{1.0};
  ConstantRule neg(-1.0);
  try {
    backtrack(p.value, vec({1.0}), 1.0, -4.0, vec({-2.0}), 1.0, neg, ctx_for(1.0, hist), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidReference);
  }
}

TEST(Solve, SquareOneIteration) {
  MonotoneRule m1;
  SteepestDescent sd;
  const auto t = solve(square(), vec({1.0}), m1, sd);
  EXPECT_EQ(t.termination, Termination::GradTolReached);
  ASSERT_EQ(t.iterations(), 1u);
  EXPECT_EQ(t.records[0].trials.size(), 2u);
  EXPECT_EQ(t.total_f_evals, 3u);
  EXPECT_EQ(t.total_grad_evals, 2u);
  EXPECT_EQ(t.final_x[0], 0.0);
}

TEST(Solve, AlreadyStationary) {
  MonotoneRule m1;
  SteepestDescent sd;
  const auto t = solve(quadratic({1.0, 1.0}), vec({1e-6, 0.0}), m1, sd);
  EXPECT_EQ(t.termination, Termination::GradTolReached);
  EXPECT_EQ(t.iterations(), 0u);
  EXPECT_EQ(t.total_f_evals, 1u);
}

TEST(Solve, ZeroBudgetStopsImmediately) {
  MonotoneRule m1;
  Bfgs bfgs;
  SolverConfig cfg;
  cfg.k_max = 0;
  const auto p = problem_by_id("rosenbrock");
  const auto t = solve(p, p.x0, m1, bfgs, cfg);
  EXPECT_EQ(t.termination, Termination::IterBudgetExhausted);
  EXPECT_EQ(t.iterations(), 0u);
}

TEST(Solve, GradientTestPrecedesBudgetTest) {
  MonotoneRule m1;
  SteepestDescent sd;
  SolverConfig cfg;
  cfg.k_max = 0;
  const auto t = solve(quadratic({1.0}), vec({0.0}), m1, sd, cfg);
  EXPECT_EQ(t.termination, Termination::GradTolReached);
}

TEST(Solve, GriewankFromCornerEndsWithinBudget) {
  for (const auto* id : {"m1", "nm1", "nm2", "nm3", "nm4", "nm5(eps,2)", "nm5(abs_f0,0.25)"}) {
    auto rule = make_rule(id);
    Bfgs bfgs;
    const auto t = solve(griewank_problem(), vec({-600.0, -600.0}), *rule, bfgs);
    EXPECT_LE(t.iterations(), 500u) << id;
    for (const auto& r : t.records) {
      for (const auto& tr : r.trials) {
        EXPECT_EQ(armijo_holds(tr.f_trial, r.f, t.config.rho, tr.step, r.direction_dot_grad, tr.nu_trial),
                  tr.accepted);
      }
    }
  }
}

TEST(Solve, AcceptHookOncePerStep) {
  ConstantRule rule(0.0);
  SteepestDescent sd;
  const auto p = quadratic({1.0, 4.0});
  const auto t = solve(p, p.x0, rule, sd);
  ASSERT_EQ(rule.accepts.size(), t.iterations());
  for (std::size_t i = 0; i < rule.accepts.size(); ++i) EXPECT_EQ(rule.accepts[i], static_cast<int>(i) + 1);
}

TEST(Solve, NonDescentDirectionStops) {
  MonotoneRule m1;
  UphillDirection up;
  const auto p = quadratic({1.0});
  const auto t = solve(p, p.x0, m1, up);
  EXPECT_EQ(t.termination, Termination::NonDescentDirection);
  EXPECT_EQ(t.iterations(), 0u);
}

TEST(Solve, InconsistentGradientStallsTheLineSearch) {
  // The gradient points the wrong way, so no step ever satisfies the test.
  Problem p;
  p.id = "liar";
  p.dim = 1;
  p.value = [](const Vector& x) { return x[0]; };
  p.gradient = [](const Vector&) { return Vector::Constant(1, -1.0); };
  p.x0 = vec({0.0});
  MonotoneRule m1;
  SteepestDescent sd;
  SolverConfig cfg;
  cfg.l_max = 30;
  const auto t = solve(p, p.x0, m1, sd, cfg);
  EXPECT_EQ(t.termination, Termination::LineSearchStalled);
  EXPECT_EQ(t.aborted_trials.size(), 31u);
  EXPECT_EQ(t.total_f_evals, 32u);
}

TEST(Solve, DimensionMismatchThrows) {
  MonotoneRule m1;
  SteepestDescent sd;
  try {
    solve(quadratic({1.0, 4.0}), vec({1.0}), m1, sd);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Solve, InvalidConfigThrows) {
  MonotoneRule m1;
  SteepestDescent sd;
  SolverConfig cfg;
  cfg.beta = 1.0;
  EXPECT_THROW(solve(quadratic({1.0}), vec({1.0}), m1, sd, cfg), Error);
}

class TraceInvariants : public ::testing::TestWithParam<std::string> {};

TEST_P(TraceInvariants, HoldOnMghProblems) {
  for (const auto& p : mgh_subset()) {
    auto rule = make_rule(GetParam());
    Bfgs bfgs;
    const auto t = solve(p, p.x0, *rule, bfgs);
    std::size_t evals = 1 + t.aborted_trials.size();
    for (std::size_t k = 0; k < t.records.size(); ++k) {
      const auto& r = t.records[k];
      evals += r.trials.size();
      EXPECT_EQ(r.trials.size(), static_cast<std::size_t>(r.l_accepted) + 1);
      EXPECT_LT(r.direction_dot_grad, 0.0);
      EXPECT_GE(r.nu, 0.0);
      const double f_next = k + 1 < t.records.size() ? t.records[k + 1].f : t.final_f;
      EXPECT_LE(f_next, r.f + r.nu) << p.id << " k=" << k;
      if (GetParam() == "m1") EXPECT_LE(f_next, r.f);
      if (k + 1 < t.records.size()) {
        EXPECT_EQ(t.records[k + 1].alpha_in, r.alpha_in * std::pow(0.5, r.l_accepted - 1));
      }
    }
    EXPECT_EQ(evals, t.total_f_evals) << p.id;
  }
}

INSTANTIATE_TEST_SUITE_P(Rules, TraceInvariants,
                         ::testing::Values("m1", "nm1", "nm2", "nm3", "nm4", "nm5(eps,2)", "nm5(eps,1)"),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (char& c : s) {
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           }
                           return s;
                         });

TEST(Solve, Deterministic) {
  const auto p = problem_by_id("wood");
  for (const auto& id : {"nm2", "nm5(eps,1)"}) {
    auto r1 = make_rule(id);
    auto r2 = make_rule(id);
    Bfgs b1, b2;
    EXPECT_TRUE(solve(p, p.x0, *r1, b1) == solve(p, p.x0, *r2, b2));
  }
}
