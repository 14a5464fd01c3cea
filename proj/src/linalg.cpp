#include "mteq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mteq/error.hpp"

namespace mteq {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged matrix literal");
    std::copy(row.begin(), row.end(), m.row(i).begin());
    ++i;
  }
  return m;
}

double Matrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (double v : row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

Vec Matrix::operator*(std::span<const double> x) const {
  if (x.size() != cols_) throw DimensionError("matrix-vector size mismatch");
  Vec y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    auto r = row(i);
    for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

LuFactorization::LuFactorization(Matrix m) : lu_(std::move(m)) {
  if (!lu_.square()) throw DimensionError("LU of a non-square matrix");
  const std::size_t n = lu_.rows();
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  const double threshold = 1e-14 * lu_.norm_inf();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        p = i;
      }
    }
    if (!(best > threshold) || best == 0.0) {
      throw SingularMatrixError("matrix is singular to working precision (pivot " +
                                std::to_string(k) + ")");
    }
    if (p != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
      std::swap(perm_[k], perm_[p]);
    }
    const double pivot = lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = lu_(i, k) / pivot;
      lu_(i, k) = l;
      if (l == 0.0) continue;
      auto ri = lu_.row(i);
      auto rk = lu_.row(k);
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= l * rk[j];
    }
  }
}

Vec LuFactorization::solve(std::span<const double> rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.size() != n) throw DimensionError("rhs length does not match matrix size");
  Vec z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = rhs[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    auto r = lu_.row(i);
    double s = z[i];
    for (std::size_t j = 0; j < i; ++j) s -= r[j] * z[j];
    z[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    auto r = lu_.row(i);
    double s = z[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= r[j] * z[j];
    z[i] = s / r[i];
  }
  return z;
}

Vec lu_solve(const Matrix& m, std::span<const double> rhs) {
  if (rhs.size() != m.rows()) throw DimensionError("rhs length does not match matrix size");
  return LuFactorization(m).solve(rhs);
}

Matrix submatrix(const Matrix& m, std::span<const std::size_t> rows,
                 std::span<const std::size_t> cols) {
  for (auto r : rows)
    if (r >= m.rows()) throw std::out_of_range("submatrix row index out of range");
  for (auto c : cols)
    if (c >= m.cols()) throw std::out_of_range("submatrix column index out of range");
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

bool is_z_matrix(const Matrix& m, double tol) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) > tol) return false;
  return true;
}

bool is_nonsingular_m_matrix(const Matrix& m) {
  if (!m.square()) return false;
  const std::size_t n = m.rows();
  if (n == 0) return true;
  if (!is_z_matrix(m, 1e-14 * m.norm_inf())) return false;

  const Vec e(n, 1.0);
  Vec z;
  try {
    z = lu_solve(m, e);
  } catch (const SingularMatrixError&) {
    return false;
  }
  for (double v : z)
    if (!(v > -1e-12)) return false;
  const Vec mz = m * z;
  return std::all_of(mz.begin(), mz.end(), [](double v) { return v > 0.0; });
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm_inf(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace mteq
