#include <stdexcept>

#include "mteq/error.hpp"
#include "mteq/solver.hpp"

namespace mteq {

namespace {

// Evaluates y + alpha d against positivity, the descent test and the
// feasibility predicate `feasible(yt, ft, out)`. Residual norms are compared
// in the form r_t^2 <= (1 - 2 sigma alpha) r^2 so logged traces replay exactly.
template <class Feasible>
bool try_trial(const MTeqProblem& p, std::span<const double> y, std::span<const double> d,
               double alpha, double residual, const SolverConfig& cfg, Feasible&& feasible,
               StepOutcome& out) {
  Vec yt(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    yt[i] = y[i] + alpha * d[i];
    if (!(yt[i] > 0.0)) return false;
  }
  Vec ft = f_eval(p, yt);
  const double rt = norm2(ft);
  if (!(rt * rt <= (1.0 - 2.0 * cfg.sigma * alpha) * residual * residual)) return false;
  if (!feasible(yt, ft, out)) return false;
  out.accepted = true;
  out.alpha = alpha;
  out.y_next = std::move(yt);
  out.f_next = std::move(ft);
  return true;
}

void check_sizes(const MTeqProblem& p, std::span<const double> y, std::span<const double> fy,
                 std::span<const double> d) {
  if (y.size() != p.dim() || fy.size() != p.dim() || d.size() != p.dim())
    throw DimensionError("line search operands do not match problem dimension");
}

auto feasibility_for(const MTeqProblem& p, const SolverConfig& cfg) {
  return [&p, &cfg](const Vec& yt, const Vec& ft, StepOutcome& out) {
    if (p.partition().zero.empty()) return in_F_eps_residual(p, ft, cfg.eps);
    Matrix jac = fprime_eval(p, yt);
    const bool ok = in_F_bar_residual(p, ft, jac, cfg.eps, cfg.eps2);
    if (ok) out.fprime_next = std::move(jac);
    return ok;
  };
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::IterationCap: return "IterationCap";
    case SolveStatus::LineSearchFailure: return "LineSearchFailure";
    case SolveStatus::BadInitialPoint: return "BadInitialPoint";
    case SolveStatus::AssumptionViolated: return "AssumptionViolated";
  }
  return "Unknown";
}

const char* to_string(Step3Mode m) {
  return m == Step3Mode::Plain ? "plain" : "step3prime";
}

Vec newton_direction(const MTeqProblem& p, std::span<const double> y) {
  const Vec fy = f_eval(p, y);
  Vec rhs(fy.size());
  for (std::size_t i = 0; i < fy.size(); ++i) rhs[i] = -fy[i];
  return lu_solve(fprime_eval(p, y), rhs);
}

StepOutcome line_search_basic(const MTeqProblem& p, std::span<const double> y,
                              std::span<const double> fy, std::span<const double> d,
                              const SolverConfig& cfg) {
  check_sizes(p, y, fy, d);
  const double residual = norm2(fy);
  auto feasible = [&](const Vec&, const Vec& ft, StepOutcome&) {
    return in_F_eps_residual(p, ft, cfg.eps);
  };
  StepOutcome out;
  double alpha = 1.0;
  for (int i = 0; i <= cfg.max_backtracks; ++i, alpha *= cfg.rho) {
    if (try_trial(p, y, d, alpha, residual, cfg, feasible, out)) return out;
    ++out.backtracks;
  }
  return out;
}

StepOutcome line_search_basic(const MTeqProblem& p, std::span<const double> y,
                              std::span<const double> d, const SolverConfig& cfg) {
  return line_search_basic(p, y, f_eval(p, y), d, cfg);
}

double step3prime_beta(double residual_norm, const SolverConfig& cfg) {
  const double beta = 1.0 - cfg.c * residual_norm;
  return beta <= 0.0 ? 1.0 : beta;
}

StepOutcome line_search_extended(const MTeqProblem& p, std::span<const double> y,
                                 std::span<const double> fy, std::span<const double> d,
                                 const SolverConfig& cfg, Step3Mode mode) {
  check_sizes(p, y, fy, d);
  const double residual = norm2(fy);
  auto feasible = feasibility_for(p, cfg);
  StepOutcome out;

  double beta = 1.0;
  int first = 0;
  if (mode == Step3Mode::Step3Prime) {
    if (try_trial(p, y, d, 1.0, residual, cfg, feasible, out)) return out;
    ++out.backtracks;
    beta = step3prime_beta(residual, cfg);
    if (beta == 1.0) first = 1;  // the unit step was just rejected
  }

  double alpha = beta;
  for (int i = 0; i < first; ++i) alpha *= cfg.rho;
  for (int i = first; i <= cfg.max_backtracks; ++i, alpha *= cfg.rho) {
    if (try_trial(p, y, d, alpha, residual, cfg, feasible, out)) return out;
    ++out.backtracks;
  }
  return out;
}

StepOutcome line_search_extended(const MTeqProblem& p, std::span<const double> y,
                                 std::span<const double> d, const SolverConfig& cfg,
                                 Step3Mode mode) {
  return line_search_extended(p, y, f_eval(p, y), d, cfg, mode);
}

}  // namespace mteq
