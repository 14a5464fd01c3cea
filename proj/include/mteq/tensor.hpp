#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mteq/linalg.hpp"

namespace mteq {

/// Entry cap for dense storage: MTEQ_DENSE_CAP if set, else 2e8.
std::size_t dense_entry_cap();

/// n^m, throwing DenseCapExceeded if it exceeds `cap` (or overflows).
std::size_t dense_size(int order, std::size_t dim, std::size_t cap);

/// Order-m, dimension-n real tensor, stored dense (n^m values, first index
/// slowest) or as sorted coordinate entries. Indices are 0-based here; the
/// file layer converts from the 1-based on-disk form.
class Tensor {
public:
  enum class Storage { Dense, Coo };

  static Tensor dense(int order, std::size_t dim, std::vector<double> values,
                      bool semi_symmetric = false);
  static Tensor zeros(int order, std::size_t dim);
  /// `indices` holds nnz tuples of length `order`, flattened. Entries are
  /// sorted lexicographically; a repeated tuple is rejected.
  static Tensor coo(int order, std::size_t dim, std::vector<std::size_t> indices,
                    std::vector<double> values, bool semi_symmetric = false);
  static Tensor identity(int order, std::size_t dim);
  static Tensor ones(int order, std::size_t dim);

  int order() const noexcept { return order_; }
  std::size_t dim() const noexcept { return dim_; }
  Storage storage() const noexcept { return storage_; }
  std::size_t stored_entries() const noexcept { return values_.size(); }

  /// True when the tensor is known to be semi-symmetric (set by
  /// semi_symmetrize and by generators of symmetric tensors). False means
  /// "not known", not "asymmetric".
  bool semi_symmetric_flag() const noexcept { return semi_symmetric_; }

  double at(std::span<const std::size_t> index) const;
  double diagonal(std::size_t i) const;

  std::span<const double> values() const noexcept { return values_; }
  /// Flattened coo index tuples (empty for dense storage).
  std::span<const std::size_t> coo_indices() const noexcept { return indices_; }

  Tensor to_dense() const;
  /// Drops exact zeros.
  Tensor to_coo() const;
  Tensor scaled(double factor) const;

  /// Visit every stored entry as f(index_tuple, value). Dense storage visits
  /// all n^m positions in lexicographic order, coo visits stored entries only.
  template <class F>
  void for_each(F&& f) const {
    const auto m = static_cast<std::size_t>(order_);
    if (storage_ == Storage::Coo) {
      for (std::size_t e = 0; e < values_.size(); ++e)
        f(std::span<const std::size_t>(indices_.data() + e * m, m), values_[e]);
      return;
    }
    std::vector<std::size_t> idx(m, 0);
    for (std::size_t lin = 0; lin < values_.size(); ++lin) {
      f(std::span<const std::size_t>(idx), values_[lin]);
      for (std::size_t p = m; p-- > 0;) {
        if (++idx[p] < dim_) break;
        idx[p] = 0;
      }
    }
  }

  friend bool operator==(const Tensor& a, const Tensor& b) = default;

private:
  Tensor(int order, std::size_t dim, Storage storage, std::vector<std::size_t> indices,
         std::vector<double> values, bool semi_symmetric);

  int order_ = 2;
  std::size_t dim_ = 0;
  Storage storage_ = Storage::Dense;
  std::vector<std::size_t> indices_;
  std::vector<double> values_;
  bool semi_symmetric_ = false;
};

/// v_i = sum over i2..im of a_{i i2..im} x_{i2}..x_{im}.
Vec apply(const Tensor& a, std::span<const double> x);

/// Exact derivative of apply(a, .) at x, summing the contribution of every
/// trailing position. Correct for tensors that are not semi-symmetric.
Matrix jacobian_matrix(const Tensor& a, std::span<const double> x);

/// Averages each slice a_{i,...} over all permutations of the trailing indices.
Tensor semi_symmetrize(const Tensor& a);

/// Checks invariance of each slice under trailing permutations, to `tol`
/// relative to the largest entry magnitude.
bool is_semi_symmetric(const Tensor& a, double tol = 0.0);

/// (x_1^alpha, ..., x_n^alpha). Throws std::domain_error for a negative base
/// with a non-integer exponent.
Vec hadamard_power(std::span<const double> x, double alpha);

/// All off-diagonal entries are <= 0.
bool is_z_tensor(const Tensor& a);

/// (A u^{m-1})_i > 64 eps |a_{i..i}| u_i^{m-1} for every i: positive beyond the
/// rounding left by cancelling row sums.
bool has_positive_image(const Tensor& a, std::span<const double> u,
                        std::span<const double> au);
bool has_positive_image(const Tensor& a, std::span<const double> u);

/// has_positive_image at u = e.
bool is_diag_dominant(const Tensor& a);

/// s*I - b.
Tensor shifted_identity_minus(double s, const Tensor& b);

struct SpectralBracket {
  double lower = 0.0;
  double upper = 0.0;
  int iterations = 0;
  bool perturbed = false;  // 1e-12 * ones was added to reach a positive iterate
};

/// Power iteration x+ = (B x^{m-1})^[1/(m-1)] for a nonnegative tensor,
/// bracketing rho(B) by the min/max of (B x^{m-1})_i / x_i^{m-1}.
SpectralBracket nqz_spectral_radius(const Tensor& b, double tol = 1e-10, int max_iter = 5000);

}  // namespace mteq
