#pragma once

#include "mteq/model.hpp"
#include "mteq/tensor.hpp"

namespace mteq {

/// One Jacobi splitting sweep for A x^{m-1} = e with A = D - B:
/// x+_i = ((1 + (B x^{m-1})_i) / a_{i..i})^{1/(m-1)}.
/// Throws InitializationError if some diagonal entry is not positive.
Vec jacobi_iterate(const Tensor& a, std::span<const double> x);

/// Same sweep for A x^{m-1} = rhs.
Vec jacobi_iterate(const Tensor& a, std::span<const double> x, std::span<const double> rhs);

struct InitialPoint {
  Vec u;                    // positive vector with A u^{m-1} > 0
  Vec x0;                   // t * u
  Vec y0;                   // x0^[m-1]
  double t = 1.0;
  int init_iterations = 0;  // Jacobi sweeps; 0 when u = e already works
  double elapsed_ms = 0.0;
};

/// Builds a feasible starting point: u = e if A e^{m-1} > 0 (with a rounding
/// margin), otherwise Jacobi sweeps on A x^{m-1} = b from e until it is, then
/// x0 = t u with t = 1.01 * max(1, max_i (eps b_i / (A u^{m-1})_i)^{1/(m-1)}).
/// Throws InitializationError if no such u is found within `max_sweeps` or
/// the scaled point fails the feasibility check.
InitialPoint initial_point(const MTeqProblem& p, const SolverConfig& cfg,
                           int max_sweeps = 100000);

}  // namespace mteq
