#include "mteq/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "mteq/rng.hpp"

namespace mteq {

namespace {

constexpr double kGravity = 6.67e-11;
constexpr double kEarthMass = 5.98e24;

void check_order(int m) {
  if (m < 2) throw std::invalid_argument("order m must be >= 2");
}

std::size_t linear_index(std::span<const std::size_t> idx, std::size_t n) {
  std::size_t lin = 0;
  for (auto v : idx) lin = lin * n + v;
  return lin;
}

// Replaces every entry by the mean over its orbit under all index permutations.
void symmetrize_full(std::vector<double>& vals, int m, std::size_t n) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  std::vector<std::size_t> perm(idx.size());
  for (std::size_t lin = 0; lin < vals.size(); ++lin) {
    if (std::is_sorted(idx.begin(), idx.end())) {
      perm = idx;
      double sum = 0.0;
      std::size_t count = 0;
      do {
        sum += vals[linear_index(perm, n)];
        ++count;
      } while (std::next_permutation(perm.begin(), perm.end()));
      const double mean = sum / static_cast<double>(count);
      do vals[linear_index(perm, n)] = mean;
      while (std::next_permutation(perm.begin(), perm.end()));
    }
    for (std::size_t p = idx.size(); p-- > 0;) {
      if (++idx[p] < n) break;
      idx[p] = 0;
    }
  }
}

Vec uniform_rhs(CounterRng& rng, std::size_t n) {
  Vec b(n);
  for (double& v : b) v = rng.uniform01();
  return b;
}

// s I - B for dense B with s = factor * max row sum of B e^{m-1}, then scaled.
MTeqProblem finish_dense(int m, std::size_t n, std::vector<double> bvals, double factor,
                         Vec rhs, bool symmetric) {
  const Tensor b = Tensor::dense(m, n, std::move(bvals), symmetric);
  const Vec rows = mteq::apply(b, Vec(n, 1.0));
  const double s = factor * *std::max_element(rows.begin(), rows.end());
  return scale_problem(shifted_identity_minus(s, b), rhs);
}

}  // namespace

MTeqProblem gen_problem1(int m, std::size_t n, std::uint64_t seed) {
  check_order(m);
  CounterRng rng(seed);
  std::vector<double> vals(dense_size(m, n, dense_entry_cap()));
  for (double& v : vals) v = rng.uniform01();
  symmetrize_full(vals, m, n);
  Vec rhs = uniform_rhs(rng, n);
  return finish_dense(m, n, std::move(vals), 1.01, std::move(rhs), true);
}

MTeqProblem gen_problem2(int m, std::size_t n, std::uint64_t seed) {
  check_order(m);
  std::vector<double> vals(dense_size(m, n, dense_entry_cap()));
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  for (double& v : vals) {
    std::size_t sum = 0;
    for (auto i : idx) sum += i + 1;
    v = std::abs(std::sin(static_cast<double>(sum)));
    for (std::size_t p = idx.size(); p-- > 0;) {
      if (++idx[p] < n) break;
      idx[p] = 0;
    }
  }
  const Tensor b = Tensor::dense(m, n, std::move(vals), true);
  CounterRng rng(seed);
  Vec rhs = uniform_rhs(rng, n);
  const double s = std::pow(static_cast<double>(n), m - 1);
  return scale_problem(shifted_identity_minus(s, b), rhs);
}

MTeqProblem gen_problem3(std::size_t n, double c0, double c1) {
  if (n < 3) throw std::invalid_argument("problem 3 needs n >= 3");
  if (!(c0 > 0.0) || !(c1 > 0.0)) throw std::invalid_argument("boundary values must be positive");
  std::vector<std::size_t> idx;
  std::vector<double> vals;
  auto add = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d, double v) {
    idx.insert(idx.end(), {a, b, c, d});
    vals.push_back(v);
  };
  const double third = 1.0 / 3.0;
  add(0, 0, 0, 0, 1.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    add(i, i, i, i, 2.0);
    add(i, i - 1, i, i, -third);
    add(i, i, i - 1, i, -third);
    add(i, i, i, i - 1, -third);
    add(i, i + 1, i, i, -third);
    add(i, i, i + 1, i, -third);
    add(i, i, i, i + 1, -third);
  }
  add(n - 1, n - 1, n - 1, n - 1, 1.0);

  Vec rhs(n, kGravity * kEarthMass / static_cast<double>((n - 1) * (n - 1)));
  rhs.front() = c0 * c0 * c0;
  rhs.back() = c1 * c1 * c1;
  return MTeqProblem(Tensor::coo(4, n, std::move(idx), std::move(vals), true), std::move(rhs));
}

MTeqProblem gen_problem4(int m, std::size_t n, std::uint64_t seed) {
  check_order(m);
  CounterRng rng(seed);
  std::vector<double> vals(dense_size(m, n, dense_entry_cap()));
  for (double& v : vals) v = rng.uniform01();
  Vec rhs = uniform_rhs(rng, n);
  return finish_dense(m, n, std::move(vals), 1.01, std::move(rhs), false);
}

MTeqProblem gen_problem5(int m, std::size_t n, std::uint64_t seed) {
  check_order(m);
  CounterRng rng(seed);
  std::vector<double> vals(dense_size(m, n, dense_entry_cap()), 0.0);
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  for (double& v : vals) {
    if (std::all_of(idx.begin() + 1, idx.end(), [&](std::size_t j) { return j < idx[0]; }))
      v = rng.uniform01();
    for (std::size_t p = idx.size(); p-- > 0;) {
      if (++idx[p] < n) break;
      idx[p] = 0;
    }
  }
  Vec rhs = uniform_rhs(rng, n);
  return finish_dense(m, n, std::move(vals), 0.5, std::move(rhs), false);
}

Vec zero_out_rhs(std::span<const double> b, std::uint64_t seed, const IndexSet& keep,
                 double frac) {
  const std::size_t n = b.size();
  if (!std::all_of(b.begin(), b.end(), [](double v) { return v > 0.0; }))
    throw std::invalid_argument("zero_out_rhs expects a positive b");
  if (!(frac > 0.0 && frac < 1.0)) throw std::invalid_argument("zero fraction must lie in (0, 1)");
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) candidates.push_back(i);
  if (n < 2 || candidates.empty())
    throw std::invalid_argument("no entry of b is eligible for zeroing");

  std::size_t count = static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)));
  count = std::clamp<std::size_t>(count, 1, std::min(candidates.size(), n - 1));

  CounterRng rng(seed, 1);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.below(candidates.size() - k));
    std::swap(candidates[k], candidates[j]);
  }
  Vec out(b.begin(), b.end());
  for (std::size_t k = 0; k < count; ++k) out[candidates[k]] = 0.0;
  return out;
}

MTeqProblem with_rhs(const MTeqProblem& p, Vec b) {
  return MTeqProblem(p.tensor(), std::move(b), p.omega());
}

IndexSet default_keep(int id) { return id == 5 ? IndexSet{0} : IndexSet{}; }

MTeqProblem generate_problem(const ProblemSpec& spec) {
  MTeqProblem p = [&] {
    switch (spec.id) {
      case 1: return gen_problem1(spec.m, spec.n, spec.seed);
      case 2: return gen_problem2(spec.m, spec.n, spec.seed);
      case 3:
        if (spec.m != 4) throw std::invalid_argument("problem 3 is order 4");
        return gen_problem3(spec.n, spec.c0, spec.c1);
      case 4: return gen_problem4(spec.m, spec.n, spec.seed);
      case 5: return gen_problem5(spec.m, spec.n, spec.seed);
      default: throw std::invalid_argument("problem id must be 1..5");
    }
  }();
  if (spec.zero_frac > 0.0)
    p = with_rhs(p, zero_out_rhs(p.rhs(), spec.seed, spec.keep.value_or(default_keep(spec.id)),
                                 spec.zero_frac));
  return p;
}

std::string manifest_json(const ProblemSpec& spec, const MTeqProblem& p) {
  nlohmann::ordered_json j;
  j["problem_kind"] = spec.id;
  j["m"] = p.order();
  j["n"] = p.dim();
  j["seed"] = spec.seed;
  j["omega"] = p.omega();
  if (spec.id == 3) {
    j["c0"] = spec.c0;
    j["c1"] = spec.c1;
  }
  j["zero_frac"] = spec.zero_frac;
  std::vector<std::size_t> keep1;
  if (spec.zero_frac > 0.0)
    for (auto k : spec.keep.value_or(default_keep(spec.id))) keep1.push_back(k + 1);
  j["keep"] = keep1;
  j["storage"] = p.tensor().storage() == Tensor::Storage::Dense ? "dense" : "coo";
  return j.dump(2) + "\n";
}

}  // namespace mteq
