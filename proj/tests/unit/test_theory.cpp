#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <nmls/engine.hpp>
#include <nmls/theory.hpp>

#include "helpers.hpp"

using namespace nmls;

namespace {

Constants unit_constants(double L = 1.0) {
  Constants c;
  c.c1 = 1.0;
  c.c2 = 1.0;
  c.L = L;
  c.f0 = 1.0;
  c.f_low = 0.0;
  return c;
}

Trace run(const Problem& p, const std::string& rule, const std::string& dir, SolverConfig cfg = {}) {
  auto r = make_rule(rule);
  auto d = make_direction(dir);
  return solve(p, p.x0, *r, *d, cfg);
}

Constants known(const Trace& t, const Problem& p) {
  return Constants::from_trace(t, p.lipschitz_known, 1.0, 1.0, p.f_low_known);
}

}  // namespace

TEST(Kappa, Examples) {
  EXPECT_EQ(kappa_c(unit_constants()), 0.25);
  auto c = unit_constants(1e6);
  EXPECT_EQ(kappa_c(c), 2.0 * 0.5 * 0.5 * 0.5 / 1e6);
  c = unit_constants();
  c.alpha0 = 2.0;
  EXPECT_EQ(kappa_c(c), 0.25);
  Constants missing;
  try {
    kappa_c(missing);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientConstants);
  }
}

TEST(AlphaBar, Examples) {
  EXPECT_EQ(alpha_bar(unit_constants()), 1.0);
  EXPECT_EQ(alpha_bar(unit_constants(4.0)), 0.25);
  auto c = unit_constants();
  c.alpha0 = 0.1;
  EXPECT_EQ(alpha_bar(c), 0.1);
}

TEST(NkBound, Examples) {
  EXPECT_EQ(nk_bound(4, 1.0, 1.0, 0.5), 10.0);
  EXPECT_EQ(nk_bound(9, 1.0, 1.0, 0.5), 20.0);
  EXPECT_DOUBLE_EQ(nk_bound(9, 1.0, 0.25, 0.5), 22.0);
  EXPECT_DOUBLE_EQ(nk_bound(9, unit_constants(4.0)), 22.0);
}

TEST(Thresholds, Summable) {
  EXPECT_EQ(t_threshold_summable(0.0, 0.25, 1.0, 0.1).value, 800);
  EXPECT_NEAR(t_threshold_summable(0.0, 0.25, 1.0, 0.1).exact, 800.0, 1e-9);
  EXPECT_EQ(t_threshold_summable(0.0, unit_constants(), 0.1).value, 800);

  // zeta(2) by partial sums with the tail estimate 1/N.
  double partial = 0.0;
  const int N = 2'000'000;
  for (int k = N; k >= 1; --k) partial += 1.0 / (static_cast<double>(k) * k);
  partial += 1.0 / N;
  EXPECT_NEAR(metropolis_sum(1.0, 2.0), partial, 1e-6);
  EXPECT_NEAR(metropolis_sum(1.0, 2.0), std::numbers::pi * std::numbers::pi / 6.0, 1e-12);
  EXPECT_EQ(t_threshold_metropolis(1.0, 2.0, 0.25, 1.0, 0.1).value, 1316);
  EXPECT_TRUE(std::isinf(metropolis_sum(1.0, 1.0)));
}

TEST(Thresholds, Decaying) {
  EXPECT_EQ(t_threshold_decaying(1.0, 0.25, 1.0, 0.5).value, 4096);
  EXPECT_EQ(t_threshold_decaying(0.0, 0.25, 1.0, 0.1).value, t_threshold_summable(0.0, 0.25, 1.0, 0.1).value);
  // The general form with k0(delta) = M / delta and C = M reduces to the same value.
  const double M = 1.0;
  EXPECT_EQ(t_threshold_general([M](double d) { return M / d; }, M, 0.25, 1.0, 0.5).value, 4096);
}

TEST(Thresholds, MetropolisSlowDecay) {
  // theta = 1: three terms 256 eps^-4, (1 + 16) eps^-4, 8 eps^-4 at eps = 0.5.
  const double eps = 0.5;
  const double a = std::pow(16.0, 2.0) * 1.0;
  const double b = 1.0 + 16.0;
  const double c = 2.0 / 0.25;
  const double oracle = std::max({a, b, c}) * std::pow(eps, -4.0);
  EXPECT_EQ(oracle, 4096.0);
  EXPECT_EQ(t_threshold_metropolis(1.0, 1.0, 0.25, 1.0, eps).value, 4096);
  EXPECT_GT(t_threshold_metropolis(1.0, 0.5, 0.25, 1.0, eps).value, 4096);
}

TEST(Cesaro, Examples) {
  const std::vector<double> zeros(10, 0.0);
  EXPECT_EQ(cesaro_average(zeros, 10), 0.0);
  const std::vector<double> harm{1.0, 0.5, 1.0 / 3.0, 0.25};
  EXPECT_NEAR(cesaro_average(harm, 4), 25.0 / 48.0, 1e-15);
  const std::vector<double> cst(7, 0.3);
  for (std::size_t T = 1; T <= 7; ++T) EXPECT_NEAR(cesaro_average(cst, T), 0.3, 1e-15);
  EXPECT_THROW(cesaro_average(cst, 0), Error);
  EXPECT_THROW(cesaro_average(cst, 8), Error);
}

TEST(Omega, CountExtremesAndBound) {
  const auto p = quadratic({0.1, 1.0, 10.0});
  const auto t = run(p, "m1", "sd");
  const auto norms = t.grad_norms();
  const double lo = *std::min_element(norms.begin(), norms.end());
  const double hi = *std::max_element(norms.begin(), norms.end());
  EXPECT_EQ(omega_count(t, lo / 2.0), static_cast<std::int64_t>(norms.size()));
  EXPECT_EQ(omega_count(t, hi * 2.0), 0);
  const double kappa = kappa_c(known(t, p));
  EXPECT_LE(static_cast<double>(omega_count(t, 1e-5)), omega_bound(t, kappa, 0.0, 0, 1e-5));
}

TEST(Omega, Nm4ClosedFormK1) {
  EXPECT_EQ(nm4_k1(0.25, 100.0), 0);
  EXPECT_EQ(nm4_k1(0.25, 1.0), 8);
  EXPECT_EQ(nm4_k1(0.25, 2.0), 2);
}

TEST(Audit, UnitQuadraticM1AllPass) {
  const auto p = quadratic({1.0});
  const auto t = run(p, "m1", "sd");
  const auto rep = audit(t, known(t, p));
  EXPECT_FALSE(rep.insufficient_constants);
  EXPECT_EQ(*rep.kappa_c, 0.25);
  EXPECT_EQ(*rep.alpha_bar, 1.0);
  EXPECT_TRUE(rep.passed()) << to_table(rep);
  for (const auto* name : {"armijo-replay", "alpha-floor", "eval-count-bound", "decrease", "grad-threshold"}) {
    ASSERT_NE(rep.find(name), nullptr) << name;
  }
}

TEST(Audit, EmptyTraceIsVacuous) {
  const auto p = quadratic({1.0});
  SolverConfig cfg;
  cfg.k_max = 0;
  const auto t = run(p, "m1", "sd", cfg);
  ASSERT_EQ(t.iterations(), 0u);
  EXPECT_TRUE(audit(t, known(t, p)).passed());
}

TEST(Audit, CorruptedNuFailsReplay) {
  const auto p = quadratic({1.0, 4.0});
  auto t = run(p, "nm2", "sd");
  ASSERT_GT(t.iterations(), 1u);
  t.records[1].nu = -1.0;
  t.records[1].trials.back().nu_trial = -1.0;
  const auto rep = audit(t, known(t, p));
  EXPECT_FALSE(rep.passed());
  EXPECT_FALSE(rep.find("armijo-replay")->passed);
  EXPECT_FALSE(rep.find("nu-nonnegative")->passed);
}

TEST(Audit, CorruptedStepFailsRecursion) {
  const auto p = quadratic({1.0, 4.0});
  auto t = run(p, "m1", "sd");
  ASSERT_GT(t.iterations(), 1u);
  t.records[1].alpha_in *= 2.0;
  EXPECT_FALSE(audit(t, known(t, p)).find("step-recursion")->passed);
}

TEST(Audit, WithoutConstantsOnlyTraceChecks) {
  const auto p = problem_by_id("rosenbrock");
  const auto t = run(p, "nm1", "bfgs");
  const auto rep = audit(t, Constants::from_trace(t));
  EXPECT_TRUE(rep.insufficient_constants);
  EXPECT_EQ(rep.find("alpha-floor"), nullptr);
  EXPECT_EQ(rep.find("decrease"), nullptr);
  EXPECT_TRUE(rep.find("armijo-replay")->passed);
  EXPECT_TRUE(rep.find("eval-count-bound")->passed);
  EXPECT_TRUE(rep.find("nm1-window")->passed);
  EXPECT_TRUE(rep.passed()) << to_table(rep);
}

TEST(Audit, EveryRuleOnKnownQuadratics) {
  for (const auto& spectrum : std::vector<std::vector<double>>{{1.0}, {1.0, 4.0}, {0.1, 1.0, 10.0}}) {
    const auto p = quadratic(spectrum);
    for (const auto* rule : {"m1", "nm1", "nm2", "nm3", "nm4", "nm5(eps,2)", "nm5(eps,1)"}) {
      const auto t = run(p, rule, "sd");
      const auto rep = audit(t, known(t, p));
      EXPECT_TRUE(rep.passed()) << p.id << " " << rule << "\n" << to_table(rep);
    }
  }
}

TEST(Audit, EvaluationRateApproachesTwo) {
  const auto p = quadratic({0.1, 1.0, 10.0});
  const auto t = run(p, "m1", "sd");
  const double ab = alpha_bar(known(t, p));
  std::size_t n = 1;
  for (std::size_t k = 1; k <= t.records.size(); ++k) {
    n += t.records[k - 1].trials.size();
    const double kk = static_cast<double>(k);
    EXPECT_LE(static_cast<double>(n) / kk, 2.0 * (1.0 + 1.0 / kk) + std::abs(std::log(ab) / std::log(0.5)) / kk);
  }
}

TEST(Audit, RunningMinReachesToleranceOnConvexProblems) {
  for (const auto& spectrum : std::vector<std::vector<double>>{{1.0}, {1.0, 4.0}, {0.1, 1.0, 10.0}}) {
    const auto p = quadratic(spectrum);
    for (const auto* rule : {"m1", "nm2", "nm3", "nm4", "nm5(eps,2)"}) {
      const auto t = run(p, rule, "bfgs");
      EXPECT_EQ(t.termination, Termination::GradTolReached);
      EXPECT_LE(min_grad_within(t, static_cast<std::int64_t>(t.iterations()) + 1), 1e-5);
    }
  }
}

TEST(Report, JsonAndTable) {
  const auto p = quadratic({1.0, 4.0});
  const auto t = run(p, "nm4", "sd");
  const auto rep = audit(t, known(t, p));
  const auto js = to_json(rep);
  EXPECT_NE(js.find("\"kappa_c\""), std::string::npos);
  EXPECT_NE(js.find("omega-bound"), std::string::npos);
  EXPECT_NE(to_table(rep).find("PASS"), std::string::npos);
}
