#include "mteq/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "mteq/error.hpp"

namespace mteq {

namespace {

constexpr std::size_t kDefaultDenseCap = 200'000'000;

void check_shape(int order, std::size_t dim) {
  if (order < 2) throw DimensionError("tensor order must be >= 2");
  if (dim < 1) throw DimensionError("tensor dimension must be >= 1");
}

void check_length(const Tensor& a, std::span<const double> x) {
  if (x.size() != a.dim())
    throw DimensionError("vector length " + std::to_string(x.size()) +
                         " does not match tensor dimension " + std::to_string(a.dim()));
}

bool is_diagonal_index(std::span<const std::size_t> idx) {
  return std::all_of(idx.begin() + 1, idx.end(), [&](std::size_t v) { return v == idx[0]; });
}

// Sorts (tuple, value) pairs lexicographically. Duplicates are summed when
// `merge` is set, otherwise rejected.
void sort_coo(std::size_t m, std::vector<std::size_t>& indices, std::vector<double>& values,
              bool merge) {
  const std::size_t nnz = values.size();
  std::vector<std::size_t> order(nnz);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto tuple_less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(indices.begin() + a * m, indices.begin() + (a + 1) * m,
                                        indices.begin() + b * m, indices.begin() + (b + 1) * m);
  };
  std::sort(order.begin(), order.end(), tuple_less);

  std::vector<std::size_t> out_idx;
  std::vector<double> out_val;
  out_idx.reserve(indices.size());
  out_val.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    const std::size_t e = order[k];
    auto first = indices.begin() + e * m;
    if (!out_val.empty() && std::equal(first, first + m, out_idx.end() - m)) {
      if (!merge) throw std::invalid_argument("duplicate coo index tuple");
      out_val.back() += values[e];
      continue;
    }
    out_idx.insert(out_idx.end(), first, first + m);
    out_val.push_back(values[e]);
  }
  indices = std::move(out_idx);
  values = std::move(out_val);
}

std::size_t linear_index(std::span<const std::size_t> idx, std::size_t n) {
  std::size_t lin = 0;
  for (auto v : idx) lin = lin * n + v;
  return lin;
}

}  // namespace

std::size_t dense_entry_cap() {
  if (const char* env = std::getenv("MTEQ_DENSE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDenseCap;
}

std::size_t dense_size(int order, std::size_t dim, std::size_t cap) {
  check_shape(order, dim);
  std::size_t total = 1;
  for (int k = 0; k < order; ++k) {
    if (total > std::numeric_limits<std::size_t>::max() / dim)
      throw DenseCapExceeded(std::numeric_limits<std::size_t>::max(), cap);
    total *= dim;
  }
  if (total > cap) throw DenseCapExceeded(total, cap);
  return total;
}

Tensor::Tensor(int order, std::size_t dim, Storage storage, std::vector<std::size_t> indices,
               std::vector<double> values, bool semi_symmetric)
    : order_(order),
      dim_(dim),
      storage_(storage),
      indices_(std::move(indices)),
      values_(std::move(values)),
      semi_symmetric_(semi_symmetric) {}

Tensor Tensor::dense(int order, std::size_t dim, std::vector<double> values, bool semi_symmetric) {
  const std::size_t total = dense_size(order, dim, dense_entry_cap());
  if (values.size() != total)
    throw DimensionError("dense tensor needs " + std::to_string(total) + " values, got " +
                         std::to_string(values.size()));
  return Tensor(order, dim, Storage::Dense, {}, std::move(values), semi_symmetric);
}

Tensor Tensor::zeros(int order, std::size_t dim) {
  return dense(order, dim, std::vector<double>(dense_size(order, dim, dense_entry_cap()), 0.0));
}

Tensor Tensor::coo(int order, std::size_t dim, std::vector<std::size_t> indices,
                   std::vector<double> values, bool semi_symmetric) {
  check_shape(order, dim);
  const auto m = static_cast<std::size_t>(order);
  if (indices.size() != values.size() * m)
    throw DimensionError("coo index array length must be order * nnz");
  for (auto v : indices)
    if (v >= dim) throw std::out_of_range("coo index out of range");
  sort_coo(m, indices, values, false);
  return Tensor(order, dim, Storage::Coo, std::move(indices), std::move(values), semi_symmetric);
}

Tensor Tensor::identity(int order, std::size_t dim) {
  check_shape(order, dim);
  const auto m = static_cast<std::size_t>(order);
  std::vector<std::size_t> idx;
  idx.reserve(dim * m);
  for (std::size_t i = 0; i < dim; ++i) idx.insert(idx.end(), m, i);
  return Tensor(order, dim, Storage::Coo, std::move(idx), std::vector<double>(dim, 1.0), true);
}

Tensor Tensor::ones(int order, std::size_t dim) {
  return dense(order, dim, std::vector<double>(dense_size(order, dim, dense_entry_cap()), 1.0),
               true);
}

double Tensor::at(std::span<const std::size_t> index) const {
  const auto m = static_cast<std::size_t>(order_);
  if (index.size() != m) throw DimensionError("index tuple length does not match tensor order");
  for (auto v : index)
    if (v >= dim_) throw std::out_of_range("tensor index out of range");
  if (storage_ == Storage::Dense) return values_[linear_index(index, dim_)];

  std::size_t lo = 0, hi = values_.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    auto first = indices_.begin() + mid * m;
    if (std::lexicographical_compare(first, first + m, index.begin(), index.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < values_.size() && std::equal(index.begin(), index.end(), indices_.begin() + lo * m))
    return values_[lo];
  return 0.0;
}

double Tensor::diagonal(std::size_t i) const {
  std::vector<std::size_t> idx(static_cast<std::size_t>(order_), i);
  return at(idx);
}

Tensor Tensor::to_dense() const {
  if (storage_ == Storage::Dense) return *this;
  std::vector<double> vals(dense_size(order_, dim_, dense_entry_cap()), 0.0);
  const auto m = static_cast<std::size_t>(order_);
  for (std::size_t e = 0; e < values_.size(); ++e)
    vals[linear_index({indices_.data() + e * m, m}, dim_)] = values_[e];
  return Tensor(order_, dim_, Storage::Dense, {}, std::move(vals), semi_symmetric_);
}

Tensor Tensor::to_coo() const {
  std::vector<std::size_t> idx;
  std::vector<double> vals;
  for_each([&](std::span<const std::size_t> i, double v) {
    if (v == 0.0) return;
    idx.insert(idx.end(), i.begin(), i.end());
    vals.push_back(v);
  });
  // for_each visits in lexicographic order already.
  return Tensor(order_, dim_, Storage::Coo, std::move(idx), std::move(vals), semi_symmetric_);
}

Tensor Tensor::scaled(double factor) const {
  Tensor out = *this;
  for (double& v : out.values_) v *= factor;
  return out;
}

Vec apply(const Tensor& a, std::span<const double> x) {
  check_length(a, x);
  const std::size_t n = a.dim();
  const auto m = static_cast<std::size_t>(a.order());

  if (a.storage() == Tensor::Storage::Coo) {
    Vec out(n, 0.0);
    auto idx = a.coo_indices();
    auto vals = a.values();
    for (std::size_t e = 0; e < vals.size(); ++e) {
      const std::size_t* t = idx.data() + e * m;
      double prod = vals[e];
      for (std::size_t q = 1; q < m; ++q) prod *= x[t[q]];
      out[t[0]] += prod;
    }
    return out;
  }

  // Contract the fastest-varying index m-1 times; each pass is a run of
  // contiguous dot products of length n.
  auto vals = a.values();
  const double* src = vals.data();
  std::size_t len = vals.size();
  std::vector<double> buf_a, buf_b;
  std::vector<double>* dst = &buf_a;
  for (std::size_t level = 0; level + 1 < m; ++level) {
    const std::size_t next_len = len / n;
    dst->assign(next_len, 0.0);
    for (std::size_t j = 0; j < next_len; ++j) {
      const double* row = src + j * n;
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += row[k] * x[k];
      (*dst)[j] = s;
    }
    src = dst->data();
    len = next_len;
    dst = (dst == &buf_a) ? &buf_b : &buf_a;
  }
  return Vec(src, src + n);
}

Matrix jacobian_matrix(const Tensor& a, std::span<const double> x) {
  check_length(a, x);
  const std::size_t n = a.dim();
  const auto m = static_cast<std::size_t>(a.order());
  Matrix jac(n, n, 0.0);

  // prefix[t] = prod of x over trailing positions 1..t-1, suffix[t] over t+1..m-1.
  std::vector<double> prefix(m + 1), suffix(m + 1);
  a.for_each([&](std::span<const std::size_t> idx, double v) {
    if (v == 0.0) return;
    prefix[1] = 1.0;
    for (std::size_t t = 2; t < m; ++t) prefix[t] = prefix[t - 1] * x[idx[t - 1]];
    suffix[m - 1] = 1.0;
    for (std::size_t t = m - 1; t-- > 1;) suffix[t] = suffix[t + 1] * x[idx[t + 1]];
    auto row = jac.row(idx[0]);
    for (std::size_t t = 1; t < m; ++t) row[idx[t]] += v * prefix[t] * suffix[t];
  });
  return jac;
}

Tensor semi_symmetrize(const Tensor& a) {
  const auto m = static_cast<std::size_t>(a.order());
  const std::size_t n = a.dim();

  if (a.storage() == Tensor::Storage::Dense) {
    auto src = a.values();
    std::vector<double> out(src.begin(), src.end());
    std::vector<std::size_t> perm(m);
    a.for_each([&](std::span<const std::size_t> idx, double) {
      if (!std::is_sorted(idx.begin() + 1, idx.end())) return;
      std::copy(idx.begin(), idx.end(), perm.begin());
      double sum = 0.0;
      std::size_t count = 0;
      do {
        sum += src[linear_index(perm, n)];
        ++count;
      } while (std::next_permutation(perm.begin() + 1, perm.end()));
      const double mean = sum / static_cast<double>(count);
      // next_permutation restored the sorted order on exit.
      do {
        out[linear_index(perm, n)] = mean;
      } while (std::next_permutation(perm.begin() + 1, perm.end()));
    });
    return Tensor::dense(a.order(), n, std::move(out), true);
  }

  // Coo: accumulate each orbit under its sorted representative, then spread
  // the orbit mean over every distinct member.
  std::map<std::vector<std::size_t>, double> orbits;
  a.for_each([&](std::span<const std::size_t> idx, double v) {
    std::vector<std::size_t> key(idx.begin(), idx.end());
    std::sort(key.begin() + 1, key.end());
    orbits[key] += v;
  });
  std::vector<std::size_t> idx;
  std::vector<double> vals;
  for (const auto& [sorted_key, sum] : orbits) {
    if (sum == 0.0) continue;
    std::vector<std::size_t> key = sorted_key;
    std::size_t count = 0;
    do ++count;
    while (std::next_permutation(key.begin() + 1, key.end()));
    const double mean = sum / static_cast<double>(count);
    do {
      idx.insert(idx.end(), key.begin(), key.end());
      vals.push_back(mean);
    } while (std::next_permutation(key.begin() + 1, key.end()));
  }
  return Tensor::coo(a.order(), n, std::move(idx), std::move(vals), true);
}

bool is_semi_symmetric(const Tensor& a, double tol) {
  const auto m = static_cast<std::size_t>(a.order());
  double scale = 0.0;
  for (double v : a.values()) scale = std::max(scale, std::abs(v));
  const double bound = tol * scale;
  bool ok = true;
  std::vector<std::size_t> perm(m);
  a.for_each([&](std::span<const std::size_t> idx, double v) {
    if (!ok) return;
    std::copy(idx.begin(), idx.end(), perm.begin());
    std::sort(perm.begin() + 1, perm.end());
    do {
      if (std::abs(a.at(perm) - v) > bound) {
        ok = false;
        return;
      }
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
  });
  return ok;
}

Vec hadamard_power(std::span<const double> x, double alpha) {
  const bool integral = std::floor(alpha) == alpha;
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0 && !integral)
      throw std::domain_error("negative base with non-integer exponent in hadamard_power");
    out[i] = std::pow(x[i], alpha);
  }
  return out;
}

bool is_z_tensor(const Tensor& a) {
  bool ok = true;
  a.for_each([&](std::span<const std::size_t> idx, double v) {
    if (ok && v > 0.0 && !is_diagonal_index(idx)) ok = false;
  });
  return ok;
}

bool has_positive_image(const Tensor& a, std::span<const double> u,
                        std::span<const double> au) {
  constexpr double kMargin = 64 * std::numeric_limits<double>::epsilon();
  const double power = a.order() - 1;
  for (std::size_t i = 0; i < au.size(); ++i)
    if (!(au[i] > kMargin * std::abs(a.diagonal(i)) * std::pow(u[i], power))) return false;
  return true;
}

bool has_positive_image(const Tensor& a, std::span<const double> u) {
  return has_positive_image(a, u, mteq::apply(a, u));
}

bool is_diag_dominant(const Tensor& a) { return has_positive_image(a, Vec(a.dim(), 1.0)); }

Tensor shifted_identity_minus(double s, const Tensor& b) {
  const auto m = static_cast<std::size_t>(b.order());
  const std::size_t n = b.dim();
  if (b.storage() == Tensor::Storage::Dense) {
    auto src = b.values();
    std::vector<double> vals(src.size());
    for (std::size_t k = 0; k < src.size(); ++k) vals[k] = -src[k];
    // Diagonal positions are spaced by (n^m - 1) / (n - 1) = 1 + n + ... + n^{m-1}.
    std::size_t stride = 0;
    for (std::size_t k = 0, p = 1; k < m; ++k, p *= n) stride += p;
    for (std::size_t i = 0; i < n; ++i) vals[i * stride] += s;
    return Tensor::dense(b.order(), n, std::move(vals), b.semi_symmetric_flag());
  }
  auto src_idx = b.coo_indices();
  std::vector<std::size_t> idx(src_idx.begin(), src_idx.end());
  std::vector<double> vals;
  vals.reserve(b.stored_entries() + n);
  for (double v : b.values()) vals.push_back(-v);
  for (std::size_t i = 0; i < n; ++i) {
    idx.insert(idx.end(), m, i);
    vals.push_back(s);
  }
  sort_coo(m, idx, vals, true);
  return Tensor::coo(b.order(), n, std::move(idx), std::move(vals), b.semi_symmetric_flag());
}

SpectralBracket nqz_spectral_radius(const Tensor& b, double tol, int max_iter) {
  bool all_zero = true;
  for (double v : b.values()) {
    if (v < 0.0) throw std::invalid_argument("nqz_spectral_radius needs a nonnegative tensor");
    if (v != 0.0) all_zero = false;
  }
  SpectralBracket out;
  if (all_zero) return out;

  const std::size_t n = b.dim();
  const double power = static_cast<double>(b.order() - 1);
  constexpr double kDelta = 1e-12;

  Vec x(n, 1.0);
  auto image = [&](const Vec& v) {
    Vec w = mteq::apply(b, v);
    if (out.perturbed) {
      double s = 0.0;
      for (double t : v) s += t;
      const double add = kDelta * std::pow(s, power);
      for (double& t : w) t += add;
    }
    return w;
  };

  for (int it = 1; it <= std::max(1, max_iter); ++it) {
    Vec w = image(x);
    if (!out.perturbed && std::any_of(w.begin(), w.end(), [](double t) { return t <= 0.0; })) {
      out.perturbed = true;
      w = image(x);
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = w[i] / std::pow(x[i], power);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    out.lower = lo;
    out.upper = hi;
    out.iterations = it;
    if (hi - lo <= tol * hi) break;

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::pow(w[i], 1.0 / power);
      scale = std::max(scale, x[i]);
    }
    for (double& t : x) t /= scale;
  }
  return out;
}

}  // namespace mteq
