#include <algorithm>

#include "mteq/solver.hpp"
#include "newton_driver.hpp"

namespace mteq {

SolveReport solve_nonnegative(const MTeqProblem& p, std::span<const double> y0,
                              const SolverConfig& cfg, Step3Mode mode) {
  cfg.validate();
  const auto start = detail::Clock::now();
  SolveReport report;
  report.mode = mode;

  const auto assumption = check_assumption_B(p);
  if (!assumption.pass || p.partition().plus.empty()) {
    report.status = SolveStatus::AssumptionViolated;
    report.message = p.partition().plus.empty() ? "b is identically zero"
                                                : "structural assumption fails:\n" +
                                                      assumption.describe();
    return report;
  }
  if (y0.size() != p.dim() ||
      !std::all_of(y0.begin(), y0.end(), [](double v) { return v > 0.0; })) {
    report.status = SolveStatus::BadInitialPoint;
    report.message = "y0 must be positive with length " + std::to_string(p.dim());
    return report;
  }

  Vec y(y0.begin(), y0.end());
  Vec fy = f_eval(p, y);
  std::optional<Matrix> jac;
  bool feasible = false;
  if (p.partition().zero.empty()) {
    feasible = in_F_eps_residual(p, fy, cfg.eps);
  } else {
    jac = fprime_eval(p, y);
    feasible = in_F_bar_residual(p, fy, *jac, cfg.eps, cfg.eps2);
  }
  if (!feasible) {
    report.status = SolveStatus::BadInitialPoint;
    report.message = "y0 lies outside the split feasible set";
    report.y_final = y;
    report.x_final = hadamard_power(y, 1.0 / (p.order() - 1));
    report.final_residual = norm2(fy);
    return report;
  }

  detail::newton_loop(p, std::move(y), std::move(fy), std::move(jac), cfg, start, report,
                      [&](const Vec& yk, const Vec& fk, const Vec& d) {
                        return line_search_extended(p, yk, fk, d, cfg, mode);
                      });
  return report;
}

}  // namespace mteq
