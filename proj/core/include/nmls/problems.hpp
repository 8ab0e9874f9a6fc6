#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nmls/types.hpp"

namespace nmls {

/// Smooth objective with analytic gradient and whatever constants are known about it.
struct Problem {
  std::string id;
  int dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  Vector x0;
  /// Lower bound f(x) >= f_low on the whole space.
  std::optional<double> f_low_known;
  /// Lipschitz constant of the gradient.
  std::optional<double> lipschitz_known;
  std::optional<double> global_min_f;

  /// Gradient-check probe box: centre (x0 when empty) and half-width per coordinate,
  /// scale * (|c_i| + 1).
  Vector probe_center;
  double probe_scale = 0.5;
};

// Griewank: 1 + (x1^2 + x2^2)/4000 - cos(x1) cos(x2/sqrt 2).
double griewank(const Vector& x);
Vector griewank_grad(const Vector& x);
Problem griewank_problem(Vector x0 = Vector::Constant(2, -600.0));

/// The 4 x 15 grid of starting points on [-600, 600]^2, i-major.
std::vector<Vector> griewank_grid();

/// f(x) = 1/2 x'Dx - b'x with D = diag(spectrum). Default start is the ones vector.
/// Throws Error(InvalidArgument) for a non-positive spectrum entry.
Problem quadratic(const std::vector<double>& spectrum, Vector b);
Problem quadratic(const std::vector<double>& spectrum);

/// Parses "quadratic[1,4]" or "quadratic[1,4|0.5,0]" (spectrum | b).
std::optional<Problem> quadratic_from_id(std::string_view id);

/// f(x) = b'x.
Problem linear(Vector b);

/// Moré–Garbow–Hillstrom sum-of-squares problems with analytic Jacobians.
std::vector<Problem> mgh_subset();

/// Every registered problem: MGH subset, Griewank, stock quadratics.
std::vector<Problem> registered_problems();

/// Registry lookup; also accepts quadratic ids. Throws Error(UnknownId).
Problem problem_by_id(std::string_view id);

/// Max over i of |central difference_i - g_i| / max(1, ||g||_inf).
double fd_gradient_check(const Problem& p, const Vector& x, double h);

/// Same, with per-coordinate step h_i = h_rel * max(1, |x_i|).
double fd_gradient_check_scaled(const Problem& p, const Vector& x, double h_rel = 1e-6);

/// Deterministic probe points inside the problem's probe box.
std::vector<Vector> probe_points(const Problem& p, int count, std::uint64_t seed);

}  // namespace nmls
