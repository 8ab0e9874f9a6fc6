#pragma once

#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "nmls/types.hpp"

namespace nmls {

struct DirectionResult {
  Vector d;
  /// Strategy state was discarded and d fell back to -g.
  bool reset = false;
};

struct UpdateInfo {
  bool applied = false;
  double secant_residual = std::numeric_limits<double>::quiet_NaN();
};

class DirectionStrategy {
 public:
  virtual ~DirectionStrategy() = default;

  virtual std::string id() const = 0;
  virtual void start(const Vector& x0, const Vector& g0) = 0;
  virtual DirectionResult direction(const Vector& g) = 0;
  /// Called once the new iterate and its gradient are known.
  virtual UpdateInfo update(const Vector& x_new, const Vector& g_new) = 0;
};

/// d = -g.
Vector steepest(const Vector& g);

class SteepestDescent final : public DirectionStrategy {
 public:
  std::string id() const override { return "sd"; }
  void start(const Vector&, const Vector&) override {}
  DirectionResult direction(const Vector& g) override { return {steepest(g), false}; }
  UpdateInfo update(const Vector&, const Vector&) override { return {}; }
};

/// Dense inverse-Hessian approximation.
struct BfgsState {
  Matrix H;
  Vector prev_x;
  Vector prev_grad;

  static BfgsState initial(const Vector& x0, const Vector& g0);
};

struct BfgsUpdateResult {
  BfgsState state;
  UpdateInfo info;
};

/// Rank-two inverse update when s'y > 0, identity on H otherwise.
/// prev_x/prev_grad always advance to (x_new, g_new).
BfgsUpdateResult bfgs_update(const BfgsState& state, const Vector& x_new, const Vector& g_new);

/// d = -H g. If that is not a descent direction H is reset to I and d = -g.
DirectionResult bfgs_direction(BfgsState& state, const Vector& g);

class Bfgs final : public DirectionStrategy {
 public:
  std::string id() const override { return "bfgs"; }
  void start(const Vector& x0, const Vector& g0) override;
  DirectionResult direction(const Vector& g) override;
  UpdateInfo update(const Vector& x_new, const Vector& g_new) override;

  const BfgsState& state() const { return state_; }

 private:
  BfgsState state_;
};

/// "sd" or "bfgs"; throws Error(UnknownId) otherwise.
std::unique_ptr<DirectionStrategy> make_direction(std::string_view id);
const std::vector<std::string>& known_direction_ids();

}  // namespace nmls
