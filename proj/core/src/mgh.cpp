// Moré–Garbow–Hillstrom test functions, f(x) = sum_i r_i(x)^2 with the
// standard starting points. Dimensions are fixed per problem (see the table
// in mgh_subset()).

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "nmls/problems.hpp"

namespace nmls {

namespace {

using Residual = std::function<void(const Vector& x, Vector& r, Matrix* J)>;

Problem least_squares(std::string id, int n, int m, Vector x0, Residual eval,
                      std::optional<double> fmin = std::nullopt) {
  Problem p;
  p.id = std::move(id);
  p.dim = n;
  p.value = [eval, m](const Vector& x) {
    Vector r(m);
    eval(x, r, nullptr);
    return r.squaredNorm();
  };
  p.gradient = [eval, n, m](const Vector& x) -> Vector {
    Vector r(m);
    Matrix J = Matrix::Zero(m, n);
    eval(x, r, &J);
    return 2.0 * J.transpose() * r;
  };
  p.x0 = std::move(x0);
  p.f_low_known = 0.0;
  p.global_min_f = fmin;
  return p;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

Problem rosenbrock() {
  return least_squares("rosenbrock", 2, 2, vec({-1.2, 1.0}),
                       [](const Vector& x, Vector& r, Matrix* J) {
                         r[0] = 10.0 * (x[1] - x[0] * x[0]);
                         r[1] = 1.0 - x[0];
                         if (J) {
                           (*J)(0, 0) = -20.0 * x[0];
                           (*J)(0, 1) = 10.0;
                           (*J)(1, 0) = -1.0;
                         }
                       },
                       0.0);
}

Problem freudenstein_roth() {
  return least_squares("freudenstein_roth", 2, 2, vec({0.5, -2.0}),
                       [](const Vector& x, Vector& r, Matrix* J) {
                         const double t = x[1];
                         r[0] = -13.0 + x[0] + ((5.0 - t) * t - 2.0) * t;
                         r[1] = -29.0 + x[0] + ((t + 1.0) * t - 14.0) * t;
                         if (J) {
                           (*J)(0, 0) = 1.0;
                           (*J)(0, 1) = 10.0 * t - 3.0 * t * t - 2.0;
                           (*J)(1, 0) = 1.0;
                           (*J)(1, 1) = 3.0 * t * t + 2.0 * t - 14.0;
                         }
                       },
                       0.0);
}

Problem powell_badly_scaled() {
  return least_squares("powell_badly_scaled", 2, 2, vec({0.0, 1.0}),
                       [](const Vector& x, Vector& r, Matrix* J) {
                         r[0] = 1e4 * x[0] * x[1] - 1.0;
                         r[1] = std::exp(-x[0]) + std::exp(-x[1]) - 1.0001;
                         if (J) {
                           (*J)(0, 0) = 1e4 * x[1];
                           (*J)(0, 1) = 1e4 * x[0];
                           (*J)(1, 0) = -std::exp(-x[0]);
                           (*J)(1, 1) = -std::exp(-x[1]);
                         }
                       },
                       0.0);
}

Problem brown_badly_scaled() {
  auto p = least_squares("brown_badly_scaled", 2, 3, vec({1.0, 1.0}),
                         [](const Vector& x, Vector& r, Matrix* J) {
                           r[0] = x[0] - 1e6;
                           r[1] = x[1] - 2e-6;
                           r[2] = x[0] * x[1] - 2.0;
                           if (J) {
                             (*J)(0, 0) = 1.0;
                             (*J)(1, 1) = 1.0;
                             (*J)(2, 0) = x[1];
                             (*J)(2, 1) = x[0];
                           }
                         },
                         0.0);
  // Around the standard start f ~ 1e12 and central differences lose everything to rounding.
  p.probe_center = vec({1e6, 2e-6});
  return p;
}

Problem beale() {
  return least_squares("beale", 2, 3, vec({1.0, 1.0}),
                       [](const Vector& x, Vector& r, Matrix* J) {
                         static constexpr std::array<double, 3> y{1.5, 2.25, 2.625};
                         for (int i = 0; i < 3; ++i) {
                           const int e = i + 1;
                           const double p = std::pow(x[1], e);
                           r[i] = y[i] - x[0] * (1.0 - p);
                           if (J) {
                             (*J)(i, 0) = -(1.0 - p);
                             (*J)(i, 1) = x[0] * e * std::pow(x[1], e - 1);
                           }
                         }
                       },
                       0.0);
}

Problem jennrich_sampson() {
  return least_squares("jennrich_sampson", 2, 10, vec({0.3, 0.4}),
                       [](const Vector& x, Vector& r, Matrix* J) {
                         for (int i = 0; i < 10; ++i) {
                           const double t = i + 1.0;
                           const double e0 = std::exp(t * x[0]);
                           const double e1 = std::exp(t * x[1]);
                           r[i] = 2.0 + 2.0 * t - (e0 + e1);
                           if (J) {
                             (*J)(i, 0) = -t * e0;
                             (*J)(i, 1) = -t * e1;
                           }
                         }
                       },
                       124.362182355);
}

Problem helical_valley() {
  return least_squares("helical_valley", 3, 3, vec({-1.0, 0.0, 0.0}),
                       [](const Vector& x, Vector& r, Matrix* J) {
                         constexpr double two_pi = 2.0 * std::numbers::pi;
                         double theta = 0.0;
                         if (x[0] > 0.0) {
                           theta = std::atan(x[1] / x[0]) / two_pi;
                         } else if (x[0] < 0.0) {
                           theta = std::atan(x[1] / x[0]) / two_pi + 0.5;
                         } else {
                           theta = x[1] >= 0.0 ? 0.25 : -0.25;
                         }
                         const double rr = x[0] * x[0] + x[1] * x[1];
                         const double rad = std::sqrt(rr);
                         r[0] = 10.0 * (x[2] - 10.0 * theta);
                         r[1] = 10.0 * (rad - 1.0);
                         r[2] = x[2];
                         if (J) {
                           (*J)(0, 0) = 100.0 * x[1] / (two_pi * rr);
                           (*J)(0, 1) = -100.0 * x[0] / (two_pi * rr);
                           (*J)(0, 2) = 10.0;
                           (*J)(1, 0) = 10.0 * x[0] / rad;
                           (*J)(1, 1) = 10.0 * x[1] / rad;
                           (*J)(2, 2) = 1.0;
                         }
                       },
                       0.0);
}

Problem bard() {
  return least_squares("bard", 3, 15, vec({1.0, 1.0, 1.0}),
                       [](const Vector& x, Vector& r, Matrix* J) {
                         static constexpr std::array<double, 15> y{0.14, 0.18, 0.22, 0.25, 0.29,
                                                                   0.32, 0.35, 0.39, 0.37, 0.58,
                                                                   0.73, 0.96, 1.34, 2.10, 4.39};
                         for (int i = 0; i < 15; ++i) {
                           const double u = i + 1.0;
                           const double v = 16.0 - u;
                           const double w = std::min(u, v);
                           const double d = v * x[1] + w * x[2];
                           r[i] = y[i] - (x[0] + u / d);
                           if (J) {
                             (*J)(i, 0) = -1.0;
                             (*J)(i, 1) = u * v / (d * d);
                             (*J)(i, 2) = u * w / (d * d);
                           }
                         }
                       },
                       8.21487730657e-3);
}

Problem gaussian() {
  return least_squares("gaussian", 3, 15, vec({0.4, 1.0, 0.0}),
                       [](const Vector& x, Vector& r, Matrix* J) {
                         static constexpr std::array<double, 15> y{
                             0.0009, 0.0044, 0.0175, 0.0540, 0.1295, 0.2420, 0.3521, 0.3989,
                             0.3521, 0.2420, 0.1295, 0.0540, 0.0175, 0.0044, 0.0009};
                         for (int i = 0; i < 15; ++i) {
                           const double t = (7.0 - i) / 2.0;
                           const double dt = t - x[2];
                           const double e = std::exp(-0.5 * x[1] * dt * dt);
                           r[i] = x[0] * e - y[i];
                           if (J) {
                             (*J)(i, 0) = e;
                             (*J)(i, 1) = -0.5 * x[0] * e * dt * dt;
                             (*J)(i, 2) = x[0] * e * x[1] * dt;
                           }
                         }
                       },
                       1.12793276961e-8);
}

Problem box3d() {
  return least_squares("box3d", 3, 10, vec({0.0, 10.0, 20.0}),
                       [](const Vector& x, Vector& r, Matrix* J) {
                         for (int i = 0; i < 10; ++i) {
                           const double t = 0.1 * (i + 1);
                           const double e0 = std::exp(-t * x[0]);
                           const double e1 = std::exp(-t * x[1]);
                           const double c = std::exp(-t) - std::exp(-10.0 * t);
                           r[i] = e0 - e1 - x[2] * c;
                           if (J) {
                             (*J)(i, 0) = -t * e0;
                             (*J)(i, 1) = t * e1;
                             (*J)(i, 2) = -c;
                           }
                         }
                       },
                       0.0);
}

Problem powell_singular() {
  return least_squares("powell_singular", 4, 4, vec({3.0, -1.0, 0.0, 1.0}),
                       [](const Vector& x, Vector& r, Matrix* J) {
                         const double s5 = std::sqrt(5.0);
                         const double s10 = std::sqrt(10.0);
                         const double a = x[1] - 2.0 * x[2];
                         const double b = x[0] - x[3];
                         r[0] = x[0] + 10.0 * x[1];
                         r[1] = s5 * (x[2] - x[3]);
                         r[2] = a * a;
                         r[3] = s10 * b * b;
                         if (J) {
                           (*J)(0, 0) = 1.0;
                           (*J)(0, 1) = 10.0;
                           (*J)(1, 2) = s5;
                           (*J)(1, 3) = -s5;
                           (*J)(2, 1) = 2.0 * a;
                           (*J)(2, 2) = -4.0 * a;
                           (*J)(3, 0) = 2.0 * s10 * b;
                           (*J)(3, 3) = -2.0 * s10 * b;
                         }
                       },
                       0.0);
}

Problem wood() {
  return least_squares("wood", 4, 6, vec({-3.0, -1.0, -3.0, -1.0}),
                       [](const Vector& x, Vector& r, Matrix* J) {
                         const double s90 = std::sqrt(90.0);
                         const double s10 = std::sqrt(10.0);
                         r[0] = 10.0 * (x[1] - x[0] * x[0]);
                         r[1] = 1.0 - x[0];
                         r[2] = s90 * (x[3] - x[2] * x[2]);
                         r[3] = 1.0 - x[2];
                         r[4] = s10 * (x[1] + x[3] - 2.0);
                         r[5] = (x[1] - x[3]) / s10;
                         if (J) {
                           (*J)(0, 0) = -20.0 * x[0];
                           (*J)(0, 1) = 10.0;
                           (*J)(1, 0) = -1.0;
                           (*J)(2, 2) = -2.0 * s90 * x[2];
                           (*J)(2, 3) = s90;
                           (*J)(3, 2) = -1.0;
                           (*J)(4, 1) = s10;
                           (*J)(4, 3) = s10;
                           (*J)(5, 1) = 1.0 / s10;
                           (*J)(5, 3) = -1.0 / s10;
                         }
                       },
                       0.0);
}

Problem kowalik_osborne() {
  return least_squares("kowalik_osborne", 4, 11, vec({0.25, 0.39, 0.415, 0.39}),
                       [](const Vector& x, Vector& r, Matrix* J) {
                         static constexpr std::array<double, 11> y{
                             0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627,
                             0.0456, 0.0342, 0.0323, 0.0235, 0.0246};
                         static constexpr std::array<double, 11> u{
                             4.0, 2.0, 1.0, 0.5, 0.25, 0.167, 0.125, 0.1, 0.0833, 0.0714, 0.0625};
                         for (int i = 0; i < 11; ++i) {
                           const double num = u[i] * (u[i] + x[1]);
                           const double den = u[i] * (u[i] + x[2]) + x[3];
                           r[i] = y[i] - x[0] * num / den;
                           if (J) {
                             (*J)(i, 0) = -num / den;
                             (*J)(i, 1) = -x[0] * u[i] / den;
                             (*J)(i, 2) = x[0] * num * u[i] / (den * den);
                             (*J)(i, 3) = x[0] * num / (den * den);
                           }
                         }
                       },
                       3.07505603849e-4);
}

Problem brown_dennis() {
  auto p = least_squares("brown_dennis", 4, 20, vec({25.0, 5.0, -5.0, -1.0}),
                         [](const Vector& x, Vector& r, Matrix* J) {
                           for (int i = 0; i < 20; ++i) {
                             const double t = (i + 1) / 5.0;
                             const double a = x[0] + t * x[1] - std::exp(t);
                             const double b = x[2] + x[3] * std::sin(t) - std::cos(t);
                             r[i] = a * a + b * b;
                             if (J) {
                               (*J)(i, 0) = 2.0 * a;
                               (*J)(i, 1) = 2.0 * a * t;
                               (*J)(i, 2) = 2.0 * b;
                               (*J)(i, 3) = 2.0 * b * std::sin(t);
                             }
                           }
                         },
                         85822.2016263563);
  return p;
}

Problem biggs_exp6() {
  return least_squares("biggs_exp6", 6, 13, vec({1.0, 2.0, 1.0, 1.0, 1.0, 1.0}),
                       [](const Vector& x, Vector& r, Matrix* J) {
                         for (int i = 0; i < 13; ++i) {
                           const double t = 0.1 * (i + 1);
                           const double y = std::exp(-t) - 5.0 * std::exp(-10.0 * t) + 3.0 * std::exp(-4.0 * t);
                           const double e1 = std::exp(-t * x[0]);
                           const double e2 = std::exp(-t * x[1]);
                           const double e5 = std::exp(-t * x[4]);
                           r[i] = x[2] * e1 - x[3] * e2 + x[5] * e5 - y;
                           if (J) {
                             (*J)(i, 0) = -t * x[2] * e1;
                             (*J)(i, 1) = t * x[3] * e2;
                             (*J)(i, 2) = e1;
                             (*J)(i, 3) = -e2;
                             (*J)(i, 4) = -t * x[5] * e5;
                             (*J)(i, 5) = e5;
                           }
                         }
                       },
                       0.0);
}

Problem extended_rosenbrock(int n) {
  Vector x0(n);
  for (int i = 0; i < n; i += 2) {
    x0[i] = -1.2;
    x0[i + 1] = 1.0;
  }
  return least_squares("extended_rosenbrock", n, n, x0,
                       [n](const Vector& x, Vector& r, Matrix* J) {
                         for (int i = 0; i < n; i += 2) {
                           r[i] = 10.0 * (x[i + 1] - x[i] * x[i]);
                           r[i + 1] = 1.0 - x[i];
                           if (J) {
                             (*J)(i, i) = -20.0 * x[i];
                             (*J)(i, i + 1) = 10.0;
                             (*J)(i + 1, i) = -1.0;
                           }
                         }
                       },
                       0.0);
}

Problem extended_powell_singular(int n) {
  Vector x0(n);
  for (int i = 0; i < n; i += 4) {
    x0[i] = 3.0;
    x0[i + 1] = -1.0;
    x0[i + 2] = 0.0;
    x0[i + 3] = 1.0;
  }
  return least_squares("extended_powell_singular", n, n, x0,
                       [n](const Vector& x, Vector& r, Matrix* J) {
                         const double s5 = std::sqrt(5.0);
                         const double s10 = std::sqrt(10.0);
                         for (int i = 0; i < n; i += 4) {
                           const double a = x[i + 1] - 2.0 * x[i + 2];
                           const double b = x[i] - x[i + 3];
                           r[i] = x[i] + 10.0 * x[i + 1];
                           r[i + 1] = s5 * (x[i + 2] - x[i + 3]);
                           r[i + 2] = a * a;
                           r[i + 3] = s10 * b * b;
                           if (J) {
                             (*J)(i, i) = 1.0;
                             (*J)(i, i + 1) = 10.0;
                             (*J)(i + 1, i + 2) = s5;
                             (*J)(i + 1, i + 3) = -s5;
                             (*J)(i + 2, i + 1) = 2.0 * a;
                             (*J)(i + 2, i + 2) = -4.0 * a;
                             (*J)(i + 3, i) = 2.0 * s10 * b;
                             (*J)(i + 3, i + 3) = -2.0 * s10 * b;
                           }
                         }
                       },
                       0.0);
}

Problem penalty1(int n) {
  Vector x0(n);
  for (int j = 0; j < n; ++j) x0[j] = j + 1.0;
  return least_squares("penalty1", n, n + 1, x0,
                       [n](const Vector& x, Vector& r, Matrix* J) {
                         const double sa = std::sqrt(1e-5);
                         for (int i = 0; i < n; ++i) {
                           r[i] = sa * (x[i] - 1.0);
                           if (J) (*J)(i, i) = sa;
                         }
                         r[n] = x.squaredNorm() - 0.25;
                         if (J) J->row(n) = 2.0 * x.transpose();
                       },
                       7.08765146709e-5);
}

Problem variably_dimensioned(int n) {
  Vector x0(n);
  for (int j = 0; j < n; ++j) x0[j] = 1.0 - (j + 1.0) / n;
  return least_squares("variably_dimensioned", n, n + 2, x0,
                       [n](const Vector& x, Vector& r, Matrix* J) {
                         double s = 0.0;
                         for (int j = 0; j < n; ++j) {
                           r[j] = x[j] - 1.0;
                           s += (j + 1.0) * (x[j] - 1.0);
                           if (J) (*J)(j, j) = 1.0;
                         }
                         r[n] = s;
                         r[n + 1] = s * s;
                         if (J) {
                           for (int j = 0; j < n; ++j) {
                             (*J)(n, j) = j + 1.0;
                             (*J)(n + 1, j) = 2.0 * s * (j + 1.0);
                           }
                         }
                       },
                       0.0);
}

Problem trigonometric(int n) {
  return least_squares("trigonometric", n, n, Vector::Constant(n, 1.0 / n),
                       [n](const Vector& x, Vector& r, Matrix* J) {
                         const double csum = x.array().cos().sum();
                         for (int i = 0; i < n; ++i) {
                           r[i] = n - csum + (i + 1.0) * (1.0 - std::cos(x[i])) - std::sin(x[i]);
                           if (J) {
                             for (int j = 0; j < n; ++j) (*J)(i, j) = std::sin(x[j]);
                             (*J)(i, i) += (i + 1.0) * std::sin(x[i]) - std::cos(x[i]);
                           }
                         }
                       },
                       0.0);
}

Problem broyden_tridiagonal(int n) {
  return least_squares("broyden_tridiagonal", n, n, Vector::Constant(n, -1.0),
                       [n](const Vector& x, Vector& r, Matrix* J) {
                         for (int i = 0; i < n; ++i) {
                           const double prev = i > 0 ? x[i - 1] : 0.0;
                           const double next = i + 1 < n ? x[i + 1] : 0.0;
                           r[i] = (3.0 - 2.0 * x[i]) * x[i] - prev - 2.0 * next + 1.0;
                           if (J) {
                             (*J)(i, i) = 3.0 - 4.0 * x[i];
                             if (i > 0) (*J)(i, i - 1) = -1.0;
                             if (i + 1 < n) (*J)(i, i + 1) = -2.0;
                           }
                         }
                       },
                       0.0);
}

Problem broyden_banded(int n) {
  return least_squares("broyden_banded", n, n, Vector::Constant(n, -1.0),
                       [n](const Vector& x, Vector& r, Matrix* J) {
                         constexpr int ml = 5;
                         constexpr int mu = 1;
                         for (int i = 0; i < n; ++i) {
                           double s = 0.0;
                           const int lo = std::max(0, i - ml);
                           const int hi = std::min(n - 1, i + mu);
                           for (int j = lo; j <= hi; ++j) {
                             if (j == i) continue;
                             s += x[j] * (1.0 + x[j]);
                             if (J) (*J)(i, j) = -(1.0 + 2.0 * x[j]);
                           }
                           r[i] = x[i] * (2.0 + 5.0 * x[i] * x[i]) + 1.0 - s;
                           if (J) (*J)(i, i) = 2.0 + 15.0 * x[i] * x[i];
                         }
                       },
                       0.0);
}

Vector boundary_start(int n) {
  const double h = 1.0 / (n + 1);
  Vector x0(n);
  for (int i = 0; i < n; ++i) {
    const double t = (i + 1) * h;
    x0[i] = t * (t - 1.0);
  }
  return x0;
}

Problem discrete_boundary_value(int n) {
  return least_squares("discrete_boundary_value", n, n, boundary_start(n),
                       [n](const Vector& x, Vector& r, Matrix* J) {
                         const double h = 1.0 / (n + 1);
                         for (int i = 0; i < n; ++i) {
                           const double t = (i + 1) * h;
                           const double prev = i > 0 ? x[i - 1] : 0.0;
                           const double next = i + 1 < n ? x[i + 1] : 0.0;
                           const double u = x[i] + t + 1.0;
                           r[i] = 2.0 * x[i] - prev - next + h * h * u * u * u / 2.0;
                           if (J) {
                             (*J)(i, i) = 2.0 + 1.5 * h * h * u * u;
                             if (i > 0) (*J)(i, i - 1) = -1.0;
                             if (i + 1 < n) (*J)(i, i + 1) = -1.0;
                           }
                         }
                       },
                       0.0);
}

Problem discrete_integral_equation(int n) {
  return least_squares("discrete_integral_equation", n, n, boundary_start(n),
                       [n](const Vector& x, Vector& r, Matrix* J) {
                         const double h = 1.0 / (n + 1);
                         for (int i = 0; i < n; ++i) {
                           const double ti = (i + 1) * h;
                           double lower = 0.0;
                           double upper = 0.0;
                           for (int j = 0; j < n; ++j) {
                             const double tj = (j + 1) * h;
                             const double u = x[j] + tj + 1.0;
                             if (j <= i) {
                               lower += tj * u * u * u;
                               if (J) (*J)(i, j) = h / 2.0 * (1.0 - ti) * tj * 3.0 * u * u;
                             } else {
                               upper += (1.0 - tj) * u * u * u;
                               if (J) (*J)(i, j) = h / 2.0 * ti * (1.0 - tj) * 3.0 * u * u;
                             }
                           }
                           r[i] = x[i] + h * ((1.0 - ti) * lower + ti * upper) / 2.0;
                           if (J) (*J)(i, i) += 1.0;
                         }
                       },
                       0.0);
}

Problem linear_full_rank(int n, int m) {
  auto p = least_squares("linear_full_rank", n, m, Vector::Ones(n),
                         [n, m](const Vector& x, Vector& r, Matrix* J) {
                           const double s = x.sum();
                           for (int i = 0; i < m; ++i) {
                             r[i] = (i < n ? x[i] : 0.0) - 2.0 / m * s - 1.0;
                             if (J) {
                               for (int j = 0; j < n; ++j) (*J)(i, j) = -2.0 / m;
                               if (i < n) (*J)(i, i) += 1.0;
                             }
                           }
                         },
                         static_cast<double>(m - n));
  p.f_low_known = static_cast<double>(m - n);
  return p;
}

Problem watson(int n) {
  return least_squares("watson", n, 31, Vector::Zero(n),
                       [n](const Vector& x, Vector& r, Matrix* J) {
                         for (int i = 0; i < 29; ++i) {
                           const double t = (i + 1) / 29.0;
                           double s1 = 0.0;
                           double s2 = 0.0;
                           double tp = 1.0;
                           for (int j = 0; j < n; ++j) {
                             s2 += x[j] * tp;
                             tp *= t;
                           }
                           tp = 1.0;
                           for (int j = 1; j < n; ++j) {
                             s1 += j * x[j] * tp;
                             tp *= t;
                           }
                           r[i] = s1 - s2 * s2 - 1.0;
                           if (J) {
                             double tj = 1.0;
                             for (int j = 0; j < n; ++j) {
                               const double d1 = j > 0 ? j * std::pow(t, j - 1) : 0.0;
                               (*J)(i, j) = d1 - 2.0 * s2 * tj;
                               tj *= t;
                             }
                           }
                         }
                         r[29] = x[0];
                         r[30] = x[1] - x[0] * x[0] - 1.0;
                         if (J) {
                           (*J)(29, 0) = 1.0;
                           (*J)(30, 0) = -2.0 * x[0];
                           (*J)(30, 1) = 1.0;
                         }
                       },
                       2.28767005355e-3);
}

Problem chebyquad(int n) {
  Vector x0(n);
  for (int j = 0; j < n; ++j) x0[j] = (j + 1.0) / (n + 1.0);
  auto p = least_squares("chebyquad", n, n, x0,
                         [n](const Vector& x, Vector& r, Matrix* J) {
                           r.setZero();
                           for (int j = 0; j < n; ++j) {
                             // Shifted Chebyshev T_i(2x - 1) and its x-derivative by recurrence.
                             const double y = 2.0 * x[j] - 1.0;
                             double t0 = 1.0, t1 = y;
                             double d0 = 0.0, d1 = 2.0;
                             for (int i = 0; i < n; ++i) {
                               r[i] += t1 / n;
                               if (J) (*J)(i, j) = d1 / n;
                               const double t2 = 2.0 * y * t1 - t0;
                               const double d2 = 4.0 * t1 + 2.0 * y * d1 - d0;
                               t0 = t1;
                               t1 = t2;
                               d0 = d1;
                               d1 = d2;
                             }
                           }
                           for (int i = 0; i < n; ++i) {
                             const int deg = i + 1;
                             if (deg % 2 == 0) r[i] += 1.0 / (deg * deg - 1.0);
                           }
                         },
                         3.51687372479e-3);
  p.probe_scale = 0.4;
  return p;
}

}  // namespace

std::vector<Problem> mgh_subset() {
  // Registry order is append-only; ids are stable.
  std::vector<Problem> out;
  out.push_back(rosenbrock());
  out.push_back(freudenstein_roth());
  out.push_back(powell_badly_scaled());
  out.push_back(brown_badly_scaled());
  out.push_back(beale());
  out.push_back(jennrich_sampson());
  out.push_back(helical_valley());
  out.push_back(bard());
  out.push_back(gaussian());
  out.push_back(box3d());
  out.push_back(powell_singular());
  out.push_back(wood());
  out.push_back(kowalik_osborne());
  out.push_back(brown_dennis());
  out.push_back(biggs_exp6());
  out.push_back(extended_rosenbrock(10));
  out.push_back(extended_powell_singular(12));
  out.push_back(penalty1(10));
  out.push_back(variably_dimensioned(10));
  out.push_back(trigonometric(10));
  out.push_back(broyden_tridiagonal(10));
  out.push_back(broyden_banded(10));
  out.push_back(discrete_boundary_value(10));
  out.push_back(discrete_integral_equation(10));
  out.push_back(linear_full_rank(10, 20));
  out.push_back(watson(6));
  out.push_back(chebyquad(8));
  return out;
}

}  // namespace nmls
