#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mteq/model.hpp"

namespace mteq {

// Benchmark generators. Random draws come from CounterRng(seed) in a fixed
// order: tensor entries in lexicographic index order, then the n entries of b.
// All except problem 3 are returned scaled by omega = max(|A|, |b|).

/// A = s I - B, B the full symmetrization of U(0,1) entries,
/// s = 1.01 max_i (B e^{m-1})_i, b ~ U(0,1).
MTeqProblem gen_problem1(int m, std::size_t n, std::uint64_t seed);

/// B_{i1..im} = |sin(i1 + ... + im)| (1-based), s = n^{m-1}, b ~ U(0,1).
MTeqProblem gen_problem2(int m, std::size_t n, std::uint64_t seed);

/// Order-4 coo stencil from the discretized x'' = -GM / x^2 on (0, 1) with
/// x(0) = c0, x(1) = c1. Not scaled.
MTeqProblem gen_problem3(std::size_t n, double c0 = 1e7, double c1 = 1e7);

/// Like problem 1 without symmetrization.
MTeqProblem gen_problem4(int m, std::size_t n, std::uint64_t seed);

/// B nonzero only where every trailing index is below the first,
/// s = 0.5 max_i (B e^{m-1})_i.
MTeqProblem gen_problem5(int m, std::size_t n, std::uint64_t seed);

/// Zeroes round(frac * n) entries (at least one, leaving at least one
/// positive) chosen uniformly among indices outside `keep`. Uses stream 1 of
/// CounterRng(seed).
Vec zero_out_rhs(std::span<const double> b, std::uint64_t seed, const IndexSet& keep = {},
                 double frac = 0.5);

/// Same tensor and omega with a new right-hand side.
MTeqProblem with_rhs(const MTeqProblem& p, Vec b);

struct ProblemSpec {
  int id = 1;
  int m = 3;
  std::size_t n = 10;
  std::uint64_t seed = 0;
  double c0 = 1e7;
  double c1 = 1e7;
  double zero_frac = 0.0;         // 0 keeps b positive
  std::optional<IndexSet> keep;   // 0-based; defaults to {0} for problem 5
};

IndexSet default_keep(int id);

/// Dispatches to gen_problemK and applies zero_out_rhs when zero_frac > 0.
MTeqProblem generate_problem(const ProblemSpec& spec);

/// JSON manifest: problem_kind, m, n, seed, omega, c0, c1, zero_frac, keep (1-based).
std::string manifest_json(const ProblemSpec& spec, const MTeqProblem& p);

}  // namespace mteq
