#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nmls/types.hpp"

namespace nmls {

/// One probe of the backtracking loop: the step, the objective at the trial
/// point and the non-monotone slack the rule supplied for it.
struct TrialRecord {
  int l = 0;
  double step = 0.0;
  double f_trial = 0.0;
  double nu_trial = 0.0;
  bool accepted = false;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct IterationRecord {
  int k = 0;
  Vector x;
  double f = 0.0;
  double grad_norm = 0.0;
  /// alpha_k at entry to the line search.
  double alpha_in = 0.0;
  int l_accepted = 0;
  double nu = 0.0;
  std::vector<TrialRecord> trials;
  Vector direction;
  double direction_dot_grad = 0.0;
  double direction_norm = 0.0;
  /// The direction strategy discarded its state and fell back to -g.
  bool direction_reset = false;
  /// Quasi-Newton update performed after this step was accepted.
  bool update_applied = false;
  /// ||H_{k+1} y_k - s_k|| / ||s_k|| for an applied update, NaN otherwise.
  double secant_residual = 0.0;

  friend bool operator==(const IterationRecord& a, const IterationRecord& b);
};

struct Trace {
  SolverConfig config;
  std::string problem_id;
  std::string rule_id;
  std::string direction_id;
  /// Resolved rule parameters (e.g. sigma, theta for nm5).
  std::map<std::string, double> rule_params;
  std::vector<IterationRecord> records;
  Termination termination = Termination::GradTolReached;
  std::size_t total_f_evals = 0;
  std::size_t total_grad_evals = 0;
  Vector final_x;
  double final_f = 0.0;
  double final_grad_norm = 0.0;
  /// Trials of an iteration whose line search was aborted (LineSearchStalled).
  std::vector<TrialRecord> aborted_trials;

  std::size_t iterations() const { return records.size(); }

  /// f(x_0); final_f when the trace has no iterations.
  double initial_f() const { return records.empty() ? final_f : records.front().f; }
  double initial_grad_norm() const {
    return records.empty() ? final_grad_norm : records.front().grad_norm;
  }

  /// Accepted nu_k for every completed iteration.
  std::vector<double> nus() const;

  /// Gradient norms at x_0..x_K, including the final point.
  std::vector<double> grad_norms() const;

  /// Step sizes alpha_0..alpha_K, where alpha_K is the value carried past the last iteration.
  std::vector<double> alphas() const;

  /// Smallest objective value seen. With include_trials, rejected trial points count too.
  double best_f(bool include_trials = true) const;

  friend bool operator==(const Trace& a, const Trace& b);
};

}  // namespace nmls
