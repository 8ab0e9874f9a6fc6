#include "nmls/directions.hpp"

#include <string>

namespace nmls {

Vector steepest(const Vector& g) { return -g; }

BfgsState BfgsState::initial(const Vector& x0, const Vector& g0) {
  return {Matrix::Identity(x0.size(), x0.size()), x0, g0};
}

BfgsUpdateResult bfgs_update(const BfgsState& state, const Vector& x_new, const Vector& g_new) {
  BfgsUpdateResult out{state, {}};
  const Vector s = x_new - state.prev_x;
  const Vector y = g_new - state.prev_grad;
  const double sy = s.dot(y);

  out.state.prev_x = x_new;
  out.state.prev_grad = g_new;
  if (!(sy > 0.0)) return out;

  // Rank-two form of (I - s y'/s'y) H (I - y s'/s'y) + s s'/s'y.
  const double inv = 1.0 / sy;
  const Vector Hy = state.H * y;
  Matrix H = state.H - inv * (s * Hy.transpose() + Hy * s.transpose()) +
             (inv * inv * y.dot(Hy) + inv) * s * s.transpose();
  H = 0.5 * (H + H.transpose()).eval();

  out.state.H = std::move(H);
  out.info.applied = true;
  const double s_norm = s.norm();
  out.info.secant_residual = s_norm > 0.0 ? (out.state.H * y - s).norm() / s_norm : 0.0;
  return out;
}

DirectionResult bfgs_direction(BfgsState& state, const Vector& g) {
  Vector d = -(state.H * g);
  if (g.dot(d) < 0.0 && all_finite(d)) return {std::move(d), false};
  state.H.setIdentity(g.size(), g.size());
  return {steepest(g), true};
}

void Bfgs::start(const Vector& x0, const Vector& g0) { state_ = BfgsState::initial(x0, g0); }

DirectionResult Bfgs::direction(const Vector& g) { return bfgs_direction(state_, g); }

UpdateInfo Bfgs::update(const Vector& x_new, const Vector& g_new) {
  auto res = bfgs_update(state_, x_new, g_new);
  state_ = std::move(res.state);
  return res.info;
}

const std::vector<std::string>& known_direction_ids() {
  static const std::vector<std::string> ids{"sd", "bfgs"};
  return ids;
}

std::unique_ptr<DirectionStrategy> make_direction(std::string_view id) {
  if (id == "sd") return std::make_unique<SteepestDescent>();
  if (id == "bfgs") return std::make_unique<Bfgs>();
  throw Error(ErrorCode::UnknownId, "unknown direction '" + std::string(id) + "'; valid ids: sd bfgs");
}

}  // namespace nmls
