#include "mteq/initializer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "mteq/error.hpp"

namespace mteq {

namespace {

bool all_positive(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double t) { return t > 0.0; });
}

Vec diagonal_of(const Tensor& a) {
  Vec d(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    d[i] = a.diagonal(i);
    if (!(d[i] > 0.0))
      throw InitializationError("diagonal entry a(" + std::to_string(i + 1) +
                                ",...) is not positive; Jacobi splitting is unusable");
  }
  return d;
}

Vec jacobi_sweep(const Tensor& a, std::span<const double> diag, std::span<const double> x,
                 std::span<const double> rhs) {
  const double power = a.order() - 1;
  const Vec ax = mteq::apply(a, x);
  Vec next(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    // (B x^{m-1})_i = a_ii x_i^{m-1} - (A x^{m-1})_i
    const double off = diag[i] * std::pow(x[i], power) - ax[i];
    next[i] = std::pow((rhs[i] + off) / diag[i], 1.0 / power);
  }
  return next;
}

}  // namespace

Vec jacobi_iterate(const Tensor& a, std::span<const double> x) {
  return jacobi_iterate(a, x, Vec(a.dim(), 1.0));
}

Vec jacobi_iterate(const Tensor& a, std::span<const double> x, std::span<const double> rhs) {
  if (x.size() != a.dim() || rhs.size() != a.dim())
    throw DimensionError("iterate length does not match tensor dimension");
  const Vec diag = diagonal_of(a);
  return jacobi_sweep(a, diag, x, rhs);
}

InitialPoint initial_point(const MTeqProblem& p, const SolverConfig& cfg, int max_sweeps) {
  const auto start = std::chrono::steady_clock::now();
  const Tensor& a = p.tensor();
  InitialPoint ip;
  ip.u.assign(p.dim(), 1.0);
  Vec au = mteq::apply(a, ip.u);

  if (!has_positive_image(a, ip.u, au)) {
    const Vec diag = diagonal_of(a);
    while (ip.init_iterations < max_sweeps) {
      ip.u = jacobi_sweep(a, diag, ip.u, p.rhs());
      ++ip.init_iterations;
      if (!all_positive(ip.u))
        throw InitializationError("Jacobi sweep produced a nonpositive component");
      au = mteq::apply(a, ip.u);
      if (has_positive_image(a, ip.u, au)) break;
    }
    if (!has_positive_image(a, ip.u, au))
      throw InitializationError("no u with A u^{m-1} > 0 after " + std::to_string(max_sweeps) +
                                " Jacobi sweeps; A may not be a strong M-tensor");
  }

  const double power = p.order() - 1;
  double t = 1.0;
  for (std::size_t i = 0; i < p.dim(); ++i)
    if (p.rhs()[i] > 0.0) t = std::max(t, std::pow(cfg.eps * p.rhs()[i] / au[i], 1.0 / power));
  ip.t = 1.01 * t;

  ip.x0.resize(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) ip.x0[i] = ip.t * ip.u[i];
  ip.y0 = hadamard_power(ip.x0, power);

  const bool feasible = p.partition().zero.empty() ? in_F_eps(p, ip.y0, cfg.eps)
                                                   : in_F_bar(p, ip.y0, cfg.eps, cfg.eps2);
  if (!feasible) throw InitializationError("scaled starting point failed the feasibility check");
  ip.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return ip;
}

}  // namespace mteq
