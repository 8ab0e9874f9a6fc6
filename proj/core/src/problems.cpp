#include "nmls/problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <string>

#include "format.hpp"

namespace nmls {

namespace {

const double kSqrt2 = std::sqrt(2.0);

void require_dim(const Vector& x, Eigen::Index n, const char* who) {
  if (x.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(who) + " expects dimension " + std::to_string(n) + ", got " +
                    std::to_string(x.size()));
  }
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto next = s.find(',', pos);
    if (next == std::string_view::npos) next = s.size();
    auto tok = s.substr(pos, next - pos);
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw Error(ErrorCode::Parse, "bad number '" + std::string(tok) + "'");
    }
    out.push_back(v);
    pos = next + 1;
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += detail::shortest(v[i]);
  }
  return out;
}

}  // namespace

double griewank(const Vector& x) {
  require_dim(x, 2, "griewank");
  return 1.0 + x[0] * x[0] / 4000.0 + x[1] * x[1] / 4000.0 - std::cos(x[0]) * std::cos(x[1] / kSqrt2);
}

Vector griewank_grad(const Vector& x) {
  require_dim(x, 2, "griewank");
  Vector g(2);
  g[0] = x[0] / 2000.0 + std::sin(x[0]) * std::cos(x[1] / kSqrt2);
  g[1] = x[1] / 2000.0 + std::cos(x[0]) * std::sin(x[1] / kSqrt2) / kSqrt2;
  return g;
}

Problem griewank_problem(Vector x0) {
  Problem p;
  p.id = "griewank";
  p.dim = 2;
  p.value = [](const Vector& x) { return griewank(x); };
  p.gradient = [](const Vector& x) { return griewank_grad(x); };
  p.x0 = std::move(x0);
  p.f_low_known = 0.0;
  p.global_min_f = 0.0;
  // Hessian of the cosine product has Frobenius norm <= 1.5.
  p.lipschitz_known = 1.0 / 2000.0 + 1.5;
  p.probe_center = Vector::Zero(2);
  p.probe_scale = 600.0;
  return p;
}

std::vector<Vector> griewank_grid() {
  std::vector<Vector> pts;
  pts.reserve(60);
  for (int i = 1; i <= 4; ++i) {
    for (int j = 1; j <= 15; ++j) {
      Vector x(2);
      x[0] = -600.0 + 1200.0 * (i - 1) / 3.0;
      x[1] = -600.0 + 1200.0 * (j - 1) / 14.0;
      pts.push_back(std::move(x));
    }
  }
  return pts;
}

Problem quadratic(const std::vector<double>& spectrum, Vector b) {
  if (spectrum.empty()) throw Error(ErrorCode::InvalidArgument, "quadratic needs a non-empty spectrum");
  for (double s : spectrum) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::InvalidArgument, "quadratic spectrum entries must be positive");
    }
  }
  const auto n = static_cast<Eigen::Index>(spectrum.size());
  require_dim(b, n, "quadratic b");
  const Vector diag = Eigen::Map<const Vector>(spectrum.data(), n);

  Problem p;
  p.dim = static_cast<int>(n);
  p.id = "quadratic[" + join(spectrum);
  if (!b.isZero(0.0)) p.id += "|" + join(std::vector<double>(b.data(), b.data() + n));
  p.id += "]";
  p.value = [diag, b](const Vector& x) { return 0.5 * x.dot(diag.cwiseProduct(x)) - b.dot(x); };
  p.gradient = [diag, b](const Vector& x) -> Vector { return diag.cwiseProduct(x) - b; };
  p.x0 = Vector::Ones(n);
  const Vector xstar = b.cwiseQuotient(diag);
  const double fmin = 0.5 * xstar.dot(diag.cwiseProduct(xstar)) - b.dot(xstar);
  p.f_low_known = fmin;
  p.global_min_f = fmin;
  p.lipschitz_known = diag.maxCoeff();
  return p;
}

Problem quadratic(const std::vector<double>& spectrum) {
  return quadratic(spectrum, Vector::Zero(static_cast<Eigen::Index>(spectrum.size())));
}

std::optional<Problem> quadratic_from_id(std::string_view id) {
  constexpr std::string_view prefix = "quadratic[";
  if (id.substr(0, prefix.size()) != prefix || id.back() != ']') return std::nullopt;
  auto body = id.substr(prefix.size(), id.size() - prefix.size() - 1);
  const auto bar = body.find('|');
  const auto spectrum = parse_list(body.substr(0, bar));
  Vector b = Vector::Zero(static_cast<Eigen::Index>(spectrum.size()));
  if (bar != std::string_view::npos) {
    const auto bv = parse_list(body.substr(bar + 1));
    if (bv.size() != spectrum.size()) {
      throw Error(ErrorCode::Parse, "quadratic b has the wrong length in '" + std::string(id) + "'");
    }
    b = Eigen::Map<const Vector>(bv.data(), static_cast<Eigen::Index>(bv.size()));
  }
  return quadratic(spectrum, b);
}

Problem linear(Vector b) {
  Problem p;
  p.id = "linear";
  p.dim = static_cast<int>(b.size());
  p.value = [b](const Vector& x) { return b.dot(x); };
  p.gradient = [b](const Vector&) { return b; };
  p.x0 = Vector::Zero(b.size());
  return p;
}

std::vector<Problem> registered_problems() {
  auto out = mgh_subset();
  out.push_back(griewank_problem());
  out.push_back(quadratic({1.0}));
  out.push_back(quadratic({1.0, 4.0}));
  out.push_back(quadratic({0.1, 1.0, 10.0}));
  return out;
}

Problem problem_by_id(std::string_view id) {
  if (auto q = quadratic_from_id(id)) return *q;
  for (auto& p : registered_problems()) {
    if (p.id == id) return p;
  }
  std::string msg = "unknown problem '" + std::string(id) + "'; valid ids:";
  for (const auto& p : registered_problems()) msg += " " + p.id;
  msg += " quadratic[...]";
  throw Error(ErrorCode::UnknownId, msg);
}

namespace {

double fd_check_impl(const Problem& p, const Vector& x, const Vector& h) {
  const Vector g = p.gradient(x);
  double worst = 0.0;
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h[i];
    const double fp = p.value(xp);
    xp[i] = x[i] - h[i];
    const double fm = p.value(xp);
    xp[i] = x[i];
    const double fd = (fp - fm) / (2.0 * h[i]);
    worst = std::max(worst, std::abs(fd - g[i]) / scale);
  }
  return worst;
}

}  // namespace

double fd_gradient_check(const Problem& p, const Vector& x, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite-difference step must be positive");
  return fd_check_impl(p, x, Vector::Constant(x.size(), h));
}

double fd_gradient_check_scaled(const Problem& p, const Vector& x, double h_rel) {
  if (!(h_rel > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite-difference step must be positive");
  Vector h(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) h[i] = h_rel * std::max(1.0, std::abs(x[i]));
  return fd_check_impl(p, x, h);
}

std::vector<Vector> probe_points(const Problem& p, int count, std::uint64_t seed) {
  const Vector& c = p.probe_center.size() == p.dim ? p.probe_center : p.x0;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    Vector x(p.dim);
    for (int i = 0; i < p.dim; ++i) x[i] = c[i] + unit(gen) * p.probe_scale * (std::abs(c[i]) + 1.0);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace nmls
