#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nmls/problems.hpp"
#include "nmls/rules.hpp"
#include "nmls/trace.hpp"

namespace nmls {

/// A rule paired with a direction strategy.
struct SolverSpec {
  RuleSpec rule;
  std::string direction = "bfgs";

  /// Rule label, with the direction appended when it is not BFGS.
  std::string label() const;
};

/// "m1,nm1,nm5(eps,2)" -> specs, all using `direction`.
std::vector<SolverSpec> parse_solver_list(std::string_view text, const std::string& direction = "bfgs");

/// The seven columns of the MGH comparison.
std::vector<SolverSpec> default_suite_solvers();

struct RunResult {
  std::string problem_id;
  std::string solver_id;
  bool solved = false;
  std::int64_t iterations = 0;
  double f_best = 0.0;
  std::int64_t f_evals = 0;
  Termination termination = Termination::IterBudgetExhausted;
  double final_grad_norm = 0.0;
  /// Non-empty when the run threw.
  std::string error;
};

struct RunOutput {
  RunResult result;
  std::optional<Trace> trace;
};

struct RunOptions {
  /// Count rejected trial points toward f_best.
  bool best_includes_trials = true;
  bool keep_traces = true;
  /// Concurrent runs; 0 means hardware concurrency.
  unsigned jobs = 1;
};

RunOutput run_one(const Problem& problem, const Vector& x0, const SolverSpec& solver,
                  const SolverConfig& cfg, const RunOptions& options = {});

/// One output per (problem, solver), sorted by (problem id, solver id).
/// Errors are captured in RunResult::error and never abort the suite.
std::vector<RunOutput> run_suite(const std::vector<Problem>& problems,
                                 const std::vector<SolverSpec>& solvers, const SolverConfig& cfg,
                                 const RunOptions& options = {});

/// Ratios n_{p,s} / n_p*; std::nullopt marks a failure (infinite ratio).
struct ProfileMatrix {
  std::vector<std::string> problems;
  std::vector<std::string> solvers;
  std::vector<std::vector<std::optional<double>>> ratios;  // [problem][solver]

  std::size_t solver_index(std::string_view solver) const;
};

/// Iteration counts are floored at 1 so a zero-iteration solve does not divide by zero.
ProfileMatrix performance_ratios(const std::vector<RunResult>& results);

/// Fraction of problems with r_{p,s} <= tau.
double rho(const ProfileMatrix& matrix, std::size_t solver, double tau);
double rho(const ProfileMatrix& matrix, std::string_view solver, double tau);

/// "start:step:stop", inclusive of stop up to rounding.
std::vector<double> parse_tau_grid(std::string_view text);

/// Linear interpolation between closest ranks, p in [0, 1].
double percentile(std::vector<double> values, double p);

struct PercentileRow {
  double min = 0.0;
  double p25 = 0.0;
  double median = 0.0;
  double p75 = 0.0;
  double max = 0.0;
};

PercentileRow summarize(const std::vector<double>& values);

struct GriewankTable {
  std::vector<std::string> solvers;
  std::vector<PercentileRow> rows;
  /// best_f[solver][start]
  std::vector<std::vector<double>> best_f;

  const PercentileRow& row(std::string_view solver) const;
};

/// Baselines (M1, NM1..NM4, NM5(eps,2)) followed by NM5(sigma, theta) per theta.
std::vector<SolverSpec> griewank_solvers(const std::vector<double>& thetas, SigmaSpec sigma,
                                         bool include_baselines = true);

GriewankTable griewank_study(const std::vector<SolverSpec>& solvers, const std::vector<Vector>& starts,
                             const SolverConfig& cfg, const RunOptions& options = {});
GriewankTable griewank_study(const std::vector<double>& thetas, SigmaSpec sigma,
                             const SolverConfig& cfg, const RunOptions& options = {});

// CSV writers. A "# generated <UTC time>" comment line precedes the header row
// when timestamp is set; bodies are deterministic.
void write_results_csv(std::ostream& out, const std::vector<RunResult>& results, bool timestamp);
void write_ratios_csv(std::ostream& out, const ProfileMatrix& matrix, bool timestamp);
void write_profile_csv(std::ostream& out, const ProfileMatrix& matrix, const std::vector<double>& taus,
                       bool timestamp);
void write_griewank_csv(std::ostream& out, const GriewankTable& table, bool timestamp);

/// RFC-4180 quoting when needed.
std::string csv_field(std::string_view s);

}  // namespace nmls
