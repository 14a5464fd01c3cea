#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mteq {

using Vec = std::vector<double>;
using IndexSet = std::vector<std::size_t>;  // sorted, 0-based

/// Dense row-major real matrix. Usually square (Jacobians), but blocks
/// extracted by `submatrix` may be rectangular or empty.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }

  /// Max absolute row sum.
  double norm_inf() const;

  Vec operator*(std::span<const double> x) const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// LU factorization with partial pivoting, PA = LU stored in place.
class LuFactorization {
public:
  /// Throws SingularMatrixError when a pivot drops below 1e-14 * ||M||_inf.
  explicit LuFactorization(Matrix m);

  Vec solve(std::span<const double> rhs) const;
  std::size_t size() const noexcept { return lu_.rows(); }

private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

Vec lu_solve(const Matrix& m, std::span<const double> rhs);

/// Order-preserving block selection; rows/cols are 0-based indices.
Matrix submatrix(const Matrix& m, std::span<const std::size_t> rows,
                 std::span<const std::size_t> cols);

/// Z-matrix test plus positive-vector certificate: solve M z = e and require
/// z >= -1e-12 and M z > 0. Returns false (never throws) on singular input.
bool is_nonsingular_m_matrix(const Matrix& m);

/// Off-diagonal entries <= tol.
bool is_z_matrix(const Matrix& m, double tol = 0.0);

double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

}  // namespace mteq
