#include <random>

#include <gtest/gtest.h>

#include <nmls/directions.hpp>
#include <nmls/engine.hpp>

#include "helpers.hpp"

using namespace nmls;
using nmls::testing::vec;

TEST(Steepest, Negates) {
  EXPECT_EQ(steepest(vec({2.0, 0.0})), vec({-2.0, 0.0}));
  EXPECT_EQ(steepest(Vector::Zero(3)), Vector::Zero(3));
  const Vector g = vec({1.0, 1.0});
  EXPECT_EQ(g.dot(steepest(g)), -2.0);
}

TEST(Bfgs, InitialIsIdentity) {
  auto s = BfgsState::initial(vec({1.0, 2.0}), vec({3.0, 4.0}));
  EXPECT_EQ(s.H, Matrix::Identity(2, 2));
  const auto d = bfgs_direction(s, vec({3.0, 4.0}));
  EXPECT_FALSE(d.reset);
  EXPECT_EQ(d.d, vec({-3.0, -4.0}));
}

TEST(Bfgs, ScalarDirection) {
  BfgsState s = BfgsState::initial(vec({0.0}), vec({0.0}));
  s.H(0, 0) = 2.0;
  EXPECT_EQ(bfgs_direction(s, vec({3.0})).d[0], -6.0);
}

TEST(Bfgs, OneDimensionalQuadraticRecoversInverseHessian) {
  const auto s0 = BfgsState::initial(vec({1.0}), vec({1.0}));
  const auto r = bfgs_update(s0, vec({0.0}), vec({0.0}));
  EXPECT_TRUE(r.info.applied);
  EXPECT_EQ(r.state.H(0, 0), 1.0);
  EXPECT_EQ(r.info.secant_residual, 0.0);
}

TEST(Bfgs, SkipsWithoutCurvature) {
  auto s0 = BfgsState::initial(vec({0.0, 0.0}), vec({1.0, 0.0}));
  s0.H << 2.0, 0.5, 0.5, 1.0;
  // s = (1,0), y = (-1,0): s'y < 0.
  const auto r = bfgs_update(s0, vec({1.0, 0.0}), vec({0.0, 0.0}));
  EXPECT_FALSE(r.info.applied);
  EXPECT_EQ(r.state.H, s0.H);
  EXPECT_EQ(r.state.prev_x, vec({1.0, 0.0}));
}

TEST(Bfgs, SecantAndSymmetryOnRandomPairs) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 6;
    Matrix A = Matrix::NullaryExpr(n, n, [&] { return n01(gen); });
    const Matrix hess = A * A.transpose() + Matrix::Identity(n, n);
    auto state = BfgsState::initial(Vector::Zero(n), Vector::Zero(n));
    Vector x = Vector::Zero(n);
    for (int step = 0; step < 5; ++step) {
      const Vector s = Vector::NullaryExpr(n, [&] { return n01(gen); });
      const Vector x_new = x + s;
      const auto r = bfgs_update(state, x_new, hess * x_new);
      ASSERT_TRUE(r.info.applied);
      const Vector y = hess * s;
      EXPECT_LE((r.state.H * y - s).norm(), 1e-10 * s.norm());
      EXPECT_LE((r.state.H - r.state.H.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_GT(r.state.H.llt().info() == Eigen::Success ? 1 : 0, 0);
      state = r.state;
      x = x_new;
    }
  }
}

TEST(Bfgs, PdDirectionIsDescent) {
  auto s = BfgsState::initial(vec({0.0, 0.0}), vec({0.0, 0.0}));
  s.H << 3.0, 1.0, 1.0, 2.0;
  const Vector g = vec({1.0, -2.0});
  const auto d = bfgs_direction(s, g);
  EXPECT_FALSE(d.reset);
  EXPECT_DOUBLE_EQ(g.dot(d.d), -g.dot(s.H * g));
}

TEST(Bfgs, NonDescentResetsToIdentity) {
  auto s = BfgsState::initial(vec({0.0, 0.0}), vec({0.0, 0.0}));
  s.H << -1.0, 0.0, 0.0, -1.0;
  const Vector g = vec({1.0, 2.0});
  const auto d = bfgs_direction(s, g);
  EXPECT_TRUE(d.reset);
  EXPECT_EQ(d.d, -g);
  EXPECT_EQ(s.H, Matrix::Identity(2, 2));
}

TEST(Bfgs, ConvexQuadraticsTerminate) {
  for (const auto& spectrum : std::vector<std::vector<double>>{{1.0}, {1.0, 4.0}, {0.1, 1.0, 10.0}, {1, 2, 3, 50, 100}}) {
    MonotoneRule m1;
    Bfgs bfgs;
    const auto p = quadratic(spectrum);
    const auto t = solve(p, p.x0, m1, bfgs);
    EXPECT_EQ(t.termination, Termination::GradTolReached);
    for (const auto& r : t.records) EXPECT_LT(r.direction_dot_grad, 0.0);
  }
}

TEST(Factory, Ids) {
  EXPECT_EQ(make_direction("sd")->id(), "sd");
  EXPECT_EQ(make_direction("bfgs")->id(), "bfgs");
  try {
    make_direction("newton");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownId);
  }
}
