#include <algorithm>
#include <ostream>

#include "mteq/solver.hpp"
#include "mteq/tensor_io.hpp"
#include "newton_driver.hpp"

namespace mteq {

SolveReport solve_positive(const MTeqProblem& p, std::span<const double> x0,
                           const SolverConfig& cfg) {
  cfg.validate();
  const auto start = detail::Clock::now();
  SolveReport report;

  if (!p.partition().zero.empty()) {
    report.status = SolveStatus::AssumptionViolated;
    report.message = "b has zero components; use the extended solver";
    return report;
  }
  if (x0.size() != p.dim() ||
      !std::all_of(x0.begin(), x0.end(), [](double v) { return v > 0.0; })) {
    report.status = SolveStatus::BadInitialPoint;
    report.message = "x0 must be positive with length " + std::to_string(p.dim());
    return report;
  }

  Vec y = hadamard_power(x0, p.order() - 1);
  Vec fy = f_eval(p, y);
  if (!in_F_eps_residual(p, fy, cfg.eps)) {
    report.status = SolveStatus::BadInitialPoint;
    report.message = "x0 violates A x0^{m-1} >= eps b";
    report.y_final = y;
    report.x_final.assign(x0.begin(), x0.end());
    report.final_residual = norm2(fy);
    return report;
  }

  detail::newton_loop(p, std::move(y), std::move(fy), std::nullopt, cfg, start, report,
                      [&](const Vec& yk, const Vec& fk, const Vec& d) {
                        return line_search_basic(p, yk, fk, d, cfg);
                      });
  return report;
}

void write_trace_csv(std::ostream& out, const SolveReport& report) {
  out << "k,alpha,residual,backtracks,feasible,elapsed_ms";
  if (report.mode) out << ",mode";
  out << '\n';
  for (const auto& r : report.trace) {
    out << r.k << ',' << format_double(r.alpha) << ',' << format_double(r.residual_norm) << ','
        << r.backtracks << ',' << (r.feasible ? 1 : 0) << ',' << format_double(r.elapsed_ms);
    if (report.mode) out << ',' << to_string(*report.mode);
    out << '\n';
  }
}

}  // namespace mteq
