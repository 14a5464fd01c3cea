#pragma once

// Shared iteration loop for the basic and extended solvers.

#include <chrono>
#include <cmath>
#include <optional>
#include <utility>

#include "mteq/error.hpp"
#include "mteq/solver.hpp"

namespace mteq::detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

inline bool stop_reached(const MTeqProblem& p, double residual, const SolverConfig& cfg) {
  if (cfg.stop == StopRule::Relative) {
    const double bnorm = norm2(p.rhs());
    return bnorm > 0.0 ? residual / bnorm <= cfg.eta : residual <= cfg.eta;
  }
  return residual <= cfg.eta;
}

/// Iterates y_{k+1} = y_k + alpha_k d_k from a feasible y0 until the stop
/// rule fires, the iteration cap is hit, or the search fails. `search` is
/// called as search(y, fy, d) and returns a StepOutcome.
template <class Search>
void newton_loop(const MTeqProblem& p, Vec y, Vec fy, std::optional<Matrix> fprime,
                 const SolverConfig& cfg, Clock::time_point start, SolveReport& report,
                 Search&& search) {
  const double inv = 1.0 / (p.order() - 1);
  auto finish = [&](SolveStatus status, double residual) {
    report.status = status;
    report.final_residual = residual;
    report.x_final = hadamard_power(y, inv);
    report.y_final = y;
  };

  double residual = norm2(fy);
  report.trace.push_back({0, 0.0, residual, 0, true, ms_since(start)});
  if (cfg.keep_iterates) report.iterates.push_back(y);

  for (int k = 0;; ++k) {
    if (stop_reached(p, residual, cfg)) return finish(SolveStatus::Converged, residual);
    if (k >= cfg.max_iter) {
      report.message = "iteration cap of " + std::to_string(cfg.max_iter) + " reached";
      return finish(SolveStatus::IterationCap, residual);
    }

    Vec d;
    try {
      const Matrix jac = fprime ? std::move(*fprime) : fprime_eval(p, y);
      Vec rhs(fy.size());
      for (std::size_t i = 0; i < fy.size(); ++i) rhs[i] = -fy[i];
      d = lu_solve(jac, rhs);
    } catch (const SingularMatrixError& e) {
      report.message = std::string("Newton system singular: ") + e.what();
      return finish(SolveStatus::LineSearchFailure, residual);
    }

    StepOutcome step = search(y, fy, d);
    if (!step.accepted) {
      report.message = "no steplength passed the feasibility and descent tests after " +
                       std::to_string(step.backtracks) + " trials";
      return finish(SolveStatus::LineSearchFailure, residual);
    }
    y = std::move(step.y_next);
    fy = std::move(step.f_next);
    fprime = std::move(step.fprime_next);
    residual = norm2(fy);
    report.trace.push_back({k + 1, step.alpha, residual, step.backtracks, true, ms_since(start)});
    if (cfg.keep_iterates) report.iterates.push_back(y);
  }
}

}  // namespace mteq::detail
