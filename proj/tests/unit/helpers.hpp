#pragma once

#include <nmls/problems.hpp>

namespace nmls::testing {

// f(x) = x^2 in one dimension.
inline Problem square() {
  Problem p;
  p.id = "square";
  p.dim = 1;
  p.value = [](const Vector& x) { return x[0] * x[0]; };
  p.gradient = [](const Vector& x) { return Vector::Constant(1, 2.0 * x[0]); };
  p.x0 = Vector::Ones(1);
  p.f_low_known = 0.0;
  p.lipschitz_known = 2.0;
  return p;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace nmls::testing
