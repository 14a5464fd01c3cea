#include <doctest.h>

#include "mteq/bench.hpp"
#include "mteq/error.hpp"
#include "mteq/initializer.hpp"
#include "mteq/problems.hpp"
#include "mteq/solver.hpp"
#include "oracles.hpp"

using namespace mteq;

namespace {

bool positive(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](double t) { return t > 0.0; });
}

}  // namespace

TEST_CASE("jacobi_iterate examples") {
  CHECK(jacobi_iterate(Tensor::identity(3, 2), Vec{1, 1}) == Vec{1, 1});
  const Tensor four = Tensor::identity(3, 3).scaled(4.0);
  for (const Vec& x : {Vec{1, 1, 1}, Vec{3, 0.2, 7}}) {
    const Vec next = jacobi_iterate(four, x);
    for (double v : next) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
  }
  const Tensor neg = Tensor::coo(3, 2, {0, 0, 0, 1, 1, 1}, {1.0, -1.0});
  CHECK_THROWS_AS(jacobi_iterate(neg, Vec{1, 1}), InitializationError);
  CHECK_THROWS_AS(jacobi_iterate(four, Vec{1, 1}), DimensionError);
}

TEST_CASE("jacobi sweeps on a triangular instance reach a positive image") {
  const MTeqProblem p = gen_problem5(3, 20, 4);
  CHECK_FALSE(is_diag_dominant(p.tensor()));
  Vec x(20, 1.0);
  int sweeps = 0;
  while (!positive(mteq::apply(p.tensor(), x)) && sweeps < 500) {
    x = jacobi_iterate(p.tensor(), x);
    ++sweeps;
  }
  CHECK(sweeps > 0);
  CHECK(sweeps < 500);
  CHECK(positive(x));
}

TEST_CASE("initial_point on the identity") {
  SolverConfig cfg;
  const MTeqProblem p(Tensor::identity(3, 2), Vec{8, 27});
  const InitialPoint ip = initial_point(p, cfg);
  CHECK(ip.u == Vec{1, 1});
  CHECK(ip.init_iterations == 0);
  const double t = 1.01 * std::max(1.0, std::sqrt(0.1 * 27.0 / 1.0));
  CHECK(ip.t == doctest::Approx(t).epsilon(1e-15));
  CHECK(ip.t == doctest::Approx(1.6595993492406536).epsilon(1e-14));
  CHECK(ip.x0[0] == doctest::Approx(t).epsilon(1e-15));
  CHECK(in_F_eps(p, ip.y0, cfg.eps));
}

TEST_CASE("initial_point keeps t at 1.01 when b is small") {
  const MTeqProblem p(Tensor::identity(4, 3), Vec{0.001, 0.002, 0.003});
  CHECK(initial_point(p, SolverConfig{}).t == 1.01);
}

TEST_CASE("diagonally dominant problems use u = e") {
  SolverConfig cfg;
  for (int id : {1, 2, 4}) {
    const MTeqProblem p = generate_problem({.id = id, .m = 3, .n = 15, .seed = 2});
    const InitialPoint ip = initial_point(p, cfg);
    CHECK(ip.init_iterations == 0);
    CHECK(ip.u == Vec(15, 1.0));
    CHECK(in_F_eps(p, ip.y0, cfg.eps));
  }
}

TEST_CASE("t u is feasible by homogeneity") {
  SolverConfig cfg;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const MTeqProblem p = gen_problem5(3, 25, seed);
    const InitialPoint ip = initial_point(p, cfg);
    CHECK(ip.init_iterations > 0);
    const Vec au = mteq::apply(p.tensor(), ip.u);
    const Vec ax = mteq::apply(p.tensor(), ip.x0);
    const double f = ip.t * ip.t;
    for (std::size_t i = 0; i < au.size(); ++i) {
      CHECK(au[i] > 0.0);
      CHECK(std::abs(ax[i] - f * au[i]) <= 1e-13 * std::abs(f * au[i]));
      CHECK(ax[i] >= cfg.eps * p.rhs()[i]);
    }
  }
}

TEST_CASE("the stencil problem initializes and solves in at most two steps") {
  SolverConfig cfg;
  cfg.stop = StopRule::Relative;
  const MTeqProblem p = gen_problem3(40);
  const InitialPoint ip = initial_point(p, cfg);
  CHECK(ip.init_iterations > 0);
  const SolveReport r = solve_positive(p, ip.x0, cfg);
  REQUIRE(r.converged());
  CHECK(r.iterations() <= 2);
  CHECK(r.final_residual / norm2(p.rhs()) <= 1e-10);
  for (double v : r.x_final) CHECK(v > 0.0);
}

TEST_CASE("initialization fails for a tensor that is not strong M") {
  const MTeqProblem p(shifted_identity_minus(3.0, Tensor::ones(3, 2)), Vec{1, 1});
  CHECK_THROWS_AS(initial_point(p, SolverConfig{}, 2000), InitializationError);
  const MTeqProblem q(shifted_identity_minus(1.0, Tensor::ones(3, 2)), Vec{1, 1});
  CHECK_THROWS_AS(initial_point(q, SolverConfig{}), InitializationError);
}
