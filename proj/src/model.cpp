#include "mteq/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mteq/error.hpp"

namespace mteq {

namespace {

void require_positive(std::span<const double> y, std::size_t n) {
  if (y.size() != n) throw DimensionError("iterate length does not match problem dimension");
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!(y[i] > 0.0))
      throw std::domain_error("y must be componentwise positive (component " + std::to_string(i) +
                              ")");
}

}  // namespace

IndexPartition partition_indices(std::span<const double> b) {
  IndexPartition part;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] < 0.0 || std::isnan(b[i]))
      throw std::invalid_argument("b must be nonnegative (component " + std::to_string(i) + ")");
    (b[i] > 0.0 ? part.plus : part.zero).push_back(i);
  }
  return part;
}

void SolverConfig::validate() const {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (!(eps2 > 0.0 && eps2 < eps)) throw std::invalid_argument("eps2 must lie in (0, eps)");
  if (!(sigma > 0.0 && sigma < 0.5)) throw std::invalid_argument("sigma must lie in (0, 1/2)");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (max_iter < 0) throw std::invalid_argument("max_iter must be nonnegative");
  if (max_backtracks < 0) throw std::invalid_argument("max_backtracks must be nonnegative");
}

MTeqProblem::MTeqProblem(Tensor a, Vec b, double omega)
    : a_(std::move(a)), b_(std::move(b)), omega_(omega) {
  if (b_.size() != a_.dim())
    throw DimensionError("rhs length " + std::to_string(b_.size()) +
                         " does not match tensor dimension " + std::to_string(a_.dim()));
  if (!(omega_ > 0.0)) throw std::invalid_argument("scaling factor must be positive");
  if (!is_z_tensor(a_)) throw std::invalid_argument("coefficient tensor is not a Z-tensor");
  partition_ = partition_indices(b_);
  slack_ = 1e-14 * (1.0 + norm_inf(b_));
}

MTeqProblem MTeqProblem::with_certificate(Vec u) const {
  if (u.size() != dim()) throw DimensionError("certificate length mismatch");
  if (!std::all_of(u.begin(), u.end(), [](double v) { return v > 0.0; }))
    throw std::invalid_argument("certificate vector must be positive");
  const Vec au = mteq::apply(a_, u);
  if (!std::all_of(au.begin(), au.end(), [](double v) { return v > 0.0; }))
    throw std::invalid_argument("A u^{m-1} is not positive for the given certificate");
  MTeqProblem out = *this;
  out.certificate_ = std::move(u);
  return out;
}

MTeqProblem scale_problem(const Tensor& a, const Vec& b) {
  double omega = 0.0;
  for (double v : a.values()) omega = std::max(omega, std::abs(v));
  for (double v : b) omega = std::max(omega, std::abs(v));
  if (omega == 0.0) throw std::invalid_argument("cannot scale an all-zero problem");
  Vec bs(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) bs[i] = b[i] / omega;
  return MTeqProblem(omega == 1.0 ? a : a.scaled(1.0 / omega), std::move(bs), omega);
}

Vec f_eval(const MTeqProblem& p, std::span<const double> y) {
  require_positive(y, p.dim());
  const Vec x = hadamard_power(y, 1.0 / (p.order() - 1));
  Vec f = mteq::apply(p.tensor(), x);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] -= p.rhs()[i];
  return f;
}

Matrix fprime_eval(const MTeqProblem& p, std::span<const double> y) {
  require_positive(y, p.dim());
  const double inv = 1.0 / (p.order() - 1);
  const Vec x = hadamard_power(y, inv);
  Matrix jac = jacobian_matrix(p.tensor(), x);
  // Chain rule through x_j = y_j^{1/(m-1)}.
  Vec col_scale(p.dim());
  for (std::size_t j = 0; j < p.dim(); ++j) col_scale[j] = inv * std::pow(y[j], inv - 1.0);
  for (std::size_t i = 0; i < jac.rows(); ++i) {
    auto row = jac.row(i);
    for (std::size_t j = 0; j < jac.cols(); ++j) row[j] *= col_scale[j];
  }
  return jac;
}

bool in_F_eps_residual(const MTeqProblem& p, std::span<const double> fy, double eps) {
  const auto& b = p.rhs();
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!(fy[i] + b[i] >= eps * b[i] - p.slack())) return false;
  return true;
}

bool in_F_eps(const MTeqProblem& p, std::span<const double> y, double eps) {
  return in_F_eps_residual(p, f_eval(p, y), eps);
}

Vec extended_threshold(const MTeqProblem& p, const Matrix& fprime, double eps2) {
  const auto& part = p.partition();
  if (part.zero.empty()) return {};
  if (part.plus.empty()) return Vec(part.zero.size(), 0.0);
  Vec b_plus(part.plus.size());
  for (std::size_t k = 0; k < part.plus.size(); ++k) b_plus[k] = p.rhs()[part.plus[k]];
  const Vec z = lu_solve(submatrix(fprime, part.plus, part.plus), b_plus);
  Vec r = submatrix(fprime, part.zero, part.plus) * z;
  for (double& v : r) v *= eps2;
  return r;
}

Vec extended_threshold(const MTeqProblem& p, std::span<const double> y, double eps2) {
  return extended_threshold(p, fprime_eval(p, y), eps2);
}

bool in_F_bar_residual(const MTeqProblem& p, std::span<const double> fy, const Matrix& fprime,
                       double eps, double eps2) {
  const auto& part = p.partition();
  const auto& b = p.rhs();
  for (auto i : part.plus)
    if (!(fy[i] + b[i] >= eps * b[i] - p.slack())) return false;
  if (part.zero.empty()) return true;
  Vec r;
  try {
    r = extended_threshold(p, fprime, eps2);
  } catch (const SingularMatrixError&) {
    return false;
  }
  for (std::size_t k = 0; k < part.zero.size(); ++k) {
    const auto i = part.zero[k];
    if (!(fy[i] + b[i] >= r[k] - p.slack())) return false;
  }
  return true;
}

bool in_F_bar(const MTeqProblem& p, std::span<const double> y, double eps, double eps2) {
  const Vec fy = f_eval(p, y);
  if (p.partition().zero.empty()) return in_F_eps_residual(p, fy, eps);
  return in_F_bar_residual(p, fy, fprime_eval(p, y), eps, eps2);
}

AssumptionReport check_assumption_B(const MTeqProblem& p) {
  const auto& part = p.partition();
  std::vector<char> in_plus(p.dim(), 0);
  for (auto i : part.plus) in_plus[i] = 1;
  std::vector<std::ptrdiff_t> row_of(p.dim(), -1);

  AssumptionReport report;
  for (auto i : part.zero) {
    row_of[i] = static_cast<std::ptrdiff_t>(report.rows.size());
    report.rows.push_back({i, false, {}});
  }
  p.tensor().for_each([&](std::span<const std::size_t> idx, double v) {
    if (v == 0.0 || row_of[idx[0]] < 0) return;
    auto& row = report.rows[static_cast<std::size_t>(row_of[idx[0]])];
    if (row.satisfied) return;
    if (std::all_of(idx.begin() + 1, idx.end(), [&](std::size_t j) { return in_plus[j] != 0; })) {
      row.satisfied = true;
      row.witness.assign(idx.begin(), idx.end());
    }
  });
  report.pass = std::all_of(report.rows.begin(), report.rows.end(),
                            [](const AssumptionReport::Row& r) { return r.satisfied; });
  return report;
}

std::string AssumptionReport::describe() const {
  std::ostringstream os;
  if (rows.empty()) {
    os << "I0 is empty; structural condition holds vacuously";
    return os.str();
  }
  for (const auto& r : rows) {
    os << "i=" << (r.index + 1) << ": ";
    if (r.satisfied) {
      os << "nonzero a(";
      for (std::size_t q = 0; q < r.witness.size(); ++q)
        os << (q ? "," : "") << (r.witness[q] + 1);
      os << ") with trailing indices in I+\n";
    } else {
      os << "no nonzero entry with all trailing indices in I+\n";
    }
  }
  os << (pass ? "pass" : "fail")
     << " (checks only the per-row nonzero-block condition, not full reducibility)";
  return os.str();
}

}  // namespace mteq
