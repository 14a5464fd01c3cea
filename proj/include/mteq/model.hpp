#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mteq/linalg.hpp"
#include "mteq/tensor.hpp"

namespace mteq {

/// I+ = {i : b_i > 0}, I0 = {i : b_i == 0}, both sorted and 0-based.
struct IndexPartition {
  IndexSet plus;
  IndexSet zero;
};

IndexPartition partition_indices(std::span<const double> b);

enum class StopRule {
  Absolute,  // ||f(y)|| <= eta
  Relative,  // ||f(y)|| / ||b|| <= eta
};

struct SolverConfig {
  double eps = 0.1;
  double eps2 = 0.05;
  double sigma = 0.1;
  double rho = 0.5;
  double eta = 1e-10;
  double c = 1.0;  // step-3' constant
  int max_iter = 300;
  int max_backtracks = 60;
  StopRule stop = StopRule::Absolute;
  bool keep_iterates = false;  // store every accepted y_k in the report

  /// Throws std::invalid_argument naming the first violated bound.
  void validate() const;
};

/// A validated M-tensor equation A x^{m-1} = b with b >= 0. Immutable.
class MTeqProblem {
public:
  /// Throws std::invalid_argument unless A is a Z-tensor and b >= 0.
  MTeqProblem(Tensor a, Vec b, double omega = 1.0);

  const Tensor& tensor() const noexcept { return a_; }
  const Vec& rhs() const noexcept { return b_; }
  double omega() const noexcept { return omega_; }
  const IndexPartition& partition() const noexcept { return partition_; }
  int order() const noexcept { return a_.order(); }
  std::size_t dim() const noexcept { return a_.dim(); }

  /// Additive slack for feasibility comparisons: 1e-14 * (1 + ||b||_inf).
  double slack() const noexcept { return slack_; }

  bool certified_strong_m() const noexcept { return certificate_.has_value(); }
  const std::optional<Vec>& certificate() const noexcept { return certificate_; }

  /// Copy carrying u as the strong-M certificate; throws unless u > 0 and
  /// apply(A, u) > 0.
  MTeqProblem with_certificate(Vec u) const;

private:
  Tensor a_;
  Vec b_;
  double omega_;
  IndexPartition partition_;
  double slack_;
  std::optional<Vec> certificate_;
};

/// omega = max(|a|, |b|) over all entries; returns (A/omega, b/omega, omega).
MTeqProblem scale_problem(const Tensor& a, const Vec& b);

/// f(y) = A (y^[1/(m-1)])^{m-1} - b; throws std::domain_error unless y > 0.
Vec f_eval(const MTeqProblem& p, std::span<const double> y);

/// Jacobian of f at y > 0.
Matrix fprime_eval(const MTeqProblem& p, std::span<const double> y);

/// A x^{m-1} >= eps * b (with slack) at x = y^[1/(m-1)].
bool in_F_eps(const MTeqProblem& p, std::span<const double> y, double eps);

/// Same test given a precomputed residual f(y).
bool in_F_eps_residual(const MTeqProblem& p, std::span<const double> fy, double eps);

/// eps2 * f'(y)_{I0,I+} f'(y)_{I+,I+}^{-1} b_{I+}, indexed like I0. Throws
/// SingularMatrixError if the I+ block is singular.
Vec extended_threshold(const MTeqProblem& p, std::span<const double> y, double eps2);
Vec extended_threshold(const MTeqProblem& p, const Matrix& fprime, double eps2);

bool in_F_bar(const MTeqProblem& p, std::span<const double> y, double eps, double eps2);

/// Same test given f(y) and f'(y); a singular I+ block counts as infeasible.
bool in_F_bar_residual(const MTeqProblem& p, std::span<const double> fy, const Matrix& fprime,
                       double eps, double eps2);

/// Per-index outcome of the structural check: for i in I0, some nonzero
/// a_{i i2..im} with every trailing index in I+.
struct AssumptionReport {
  struct Row {
    std::size_t index = 0;                 // 0-based i in I0
    bool satisfied = false;
    std::vector<std::size_t> witness;      // full index tuple when satisfied
  };
  std::vector<Row> rows;
  bool pass = true;

  std::string describe() const;
};

AssumptionReport check_assumption_B(const MTeqProblem& p);

}  // namespace mteq
