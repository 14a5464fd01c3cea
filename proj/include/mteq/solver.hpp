#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mteq/linalg.hpp"
#include "mteq/model.hpp"

namespace mteq {

enum class SolveStatus {
  Converged,
  IterationCap,
  LineSearchFailure,
  BadInitialPoint,
  AssumptionViolated,
};

const char* to_string(SolveStatus s);

/// One row per iterate y_k. Row k >= 1 describes the step that produced y_k;
/// row 0 is the starting point and carries alpha = 0, backtracks = 0.
struct IterationRecord {
  int k = 0;
  double alpha = 0.0;
  double residual_norm = 0.0;  // ||f(y_k)||_2
  int backtracks = 0;
  bool feasible = false;
  double elapsed_ms = 0.0;
};

enum class Step3Mode { Plain, Step3Prime };

const char* to_string(Step3Mode m);

struct SolveReport {
  SolveStatus status = SolveStatus::BadInitialPoint;
  Vec x_final;
  Vec y_final;
  std::vector<IterationRecord> trace;
  double final_residual = 0.0;
  std::vector<Vec> iterates;        // filled when SolverConfig::keep_iterates
  std::optional<Step3Mode> mode;    // set by the extended solver only
  std::string message;

  int iterations() const { return trace.empty() ? 0 : static_cast<int>(trace.size()) - 1; }
  bool converged() const { return status == SolveStatus::Converged; }
};

/// Result of a steplength search; `accepted` is false when every trial failed.
struct StepOutcome {
  bool accepted = false;
  double alpha = 0.0;
  int backtracks = 0;
  Vec y_next;
  Vec f_next;
  std::optional<Matrix> fprime_next;  // cached when the feasibility test needed it
};

/// Solves f'(y) d = -f(y). Throws SingularMatrixError.
Vec newton_direction(const MTeqProblem& p, std::span<const double> y);

/// Largest rho^i keeping y + alpha d positive, in F_eps, and satisfying
/// ||f(y + alpha d)||^2 <= (1 - 2 sigma alpha) ||f(y)||^2.
StepOutcome line_search_basic(const MTeqProblem& p, std::span<const double> y,
                              std::span<const double> d, const SolverConfig& cfg);
StepOutcome line_search_basic(const MTeqProblem& p, std::span<const double> y,
                              std::span<const double> fy, std::span<const double> d,
                              const SolverConfig& cfg);

/// beta = 1 - c ||f(y)||, reset to 1 when beta <= 0.
double step3prime_beta(double residual_norm, const SolverConfig& cfg);

/// Same acceptance tests against the split feasible set. In Step3Prime mode
/// the unit step is tried first, then beta * rho^i with beta = 1 - c ||f(y)||
/// (reset to 1 when beta <= 0).
StepOutcome line_search_extended(const MTeqProblem& p, std::span<const double> y,
                                 std::span<const double> d, const SolverConfig& cfg,
                                 Step3Mode mode);
StepOutcome line_search_extended(const MTeqProblem& p, std::span<const double> y,
                                 std::span<const double> fy, std::span<const double> d,
                                 const SolverConfig& cfg, Step3Mode mode);

/// Damped Newton for b > 0 starting from x0 (y0 = x0^[m-1]).
SolveReport solve_positive(const MTeqProblem& p, std::span<const double> x0,
                           const SolverConfig& cfg = {});

/// Extended Newton for b >= 0 starting from y0 (already in y-space).
SolveReport solve_nonnegative(const MTeqProblem& p, std::span<const double> y0,
                              const SolverConfig& cfg = {},
                              Step3Mode mode = Step3Mode::Step3Prime);

/// CSV header "k,alpha,residual,backtracks,feasible,elapsed_ms" plus a
/// trailing "mode" column for extended-solver reports.
void write_trace_csv(std::ostream& out, const SolveReport& report);

}  // namespace mteq
