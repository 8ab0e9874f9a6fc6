#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace nmls {

/// Finite-dimensional real point, direction or gradient. Euclidean norm throughout.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  DegenerateStart,
  InvalidReference,
  InsufficientConstants,
  UnknownId,
  Parse,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parameters of the backtracking descent loop.
struct SolverConfig {
  double alpha0 = 1.0;
  double beta = 0.5;
  double rho = 0.5;
  double grad_tol = 1e-5;
  int k_max = 500;
  /// Largest backtracking index probed in one iteration.
  int l_max = 100;
  /// Trial steps below this abort the line search.
  double step_floor = 1e-20;

  /// Throws Error(InvalidArgument) when a field is out of range.
  void validate() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

enum class Termination {
  GradTolReached,
  IterBudgetExhausted,
  LineSearchStalled,
  NonDescentDirection,
};

std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view s);

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace nmls
