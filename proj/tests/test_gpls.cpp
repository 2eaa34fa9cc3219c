#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sarrs/gpls.hpp"
#include "sarrs/rng.hpp"

using namespace sarrs;

namespace {

GplsProblem random_problem(Rng& rng, Index n, Index p, Index r, double lambda) {
  const Matrix x = rng.gaussian_matrix(n, p);
  const Matrix w = rng.gaussian_matrix(n, r);
  return GplsProblem(x, w, PenaltySpec::group_lasso(lambda));
}

}  // namespace

TEST_CASE("orthonormal design with no penalty returns the least-squares fit") {
  Rng rng(501);
  const Matrix q = oracles::random_orthonormal(rng, 8, 8);
  const Matrix w = rng.gaussian_matrix(8, 3);
  const GplsSolution sol = solve_gpls(GplsProblem(q, w, PenaltySpec::group_lasso(0.0)));
  CHECK(sol.converged);
  CHECK((sol.b - q.transpose() * w).norm() < 1e-9);
}

TEST_CASE("a large enough penalty empties the solution") {
  Rng rng(503);
  const GplsProblem problem = random_problem(rng, 12, 6, 2, 0.0);
  double max_corr = 0.0;
  for (Index j = 0; j < 6; ++j)
    max_corr = std::max(max_corr, (problem.w.transpose() * problem.x.col(j)).norm());
  const GplsProblem heavy(problem.x, problem.w, PenaltySpec::group_lasso(1.5 * max_corr));
  const GplsSolution sol = solve_gpls(heavy);
  CHECK(sol.converged);
  CHECK(sol.b.norm() == 0.0);
  CHECK(sol.iterations <= 2);
}

TEST_CASE("group lasso matches a proximal-gradient reference") {
  for (std::uint64_t seed : {601, 602, 603}) {
    Rng rng(seed);
    const Index n = 30, p = 6, r = 3;
    const Matrix x = rng.gaussian_matrix(n, p);
    const Matrix w = x.leftCols(r) + 0.3 * rng.gaussian_matrix(n, r);
    const double lambda = 2.0;
    GplsOptions options;
    options.tol = 1e-11;
    const GplsSolution sol = solve_gpls(GplsProblem(x, w, PenaltySpec::group_lasso(lambda)), options);
    const auto ref = oracles::prox_gradient_group_lasso(x, w, lambda, 20000);
    CHECK(sol.objective == doctest::Approx(ref.objective).epsilon(1e-8));
    CHECK((sol.b - ref.b).norm() < 1e-5);
  }
}

TEST_CASE("objective equals an independent evaluation and the trace end") {
  Rng rng(605);
  for (const PenaltySpec& pen :
       {PenaltySpec::group_lasso(1.2), PenaltySpec::group_mcp(1.0, 3.0),
        PenaltySpec::group_scad(0.8, 3.7), PenaltySpec::capped_l1(0.9)}) {
    const Matrix x = rng.gaussian_matrix(25, 5);
    const Matrix w = rng.gaussian_matrix(25, 2);
    const GplsSolution sol = solve_gpls(GplsProblem(x, w, pen));
    CHECK(sol.objective ==
          doctest::Approx(oracles::group_objective(x, w, sol.b, pen)).epsilon(1e-10));
    CHECK(sol.objective ==
          doctest::Approx(sol.objective_trace.back()).epsilon(1e-8));
  }
}

TEST_CASE("objective trace is monotone nonincreasing for every penalty") {
  Rng rng(607);
  for (const PenaltySpec& pen :
       {PenaltySpec::group_lasso(0.8), PenaltySpec::group_mcp(0.7, 3.0),
        PenaltySpec::group_scad(0.9, 3.7), PenaltySpec::capped_l1(0.6)}) {
    const Matrix x = rng.gaussian_matrix(20, 8);
    const Matrix w = rng.gaussian_matrix(20, 3);
    const GplsSolution sol = solve_gpls(GplsProblem(x, w, pen));
    for (std::size_t i = 1; i < sol.objective_trace.size(); ++i)
      CHECK(sol.objective_trace[i] <= sol.objective_trace[i - 1] + 1e-10);
  }
}

TEST_CASE("converged solutions satisfy the reported residual bound") {
  Rng rng(609);
  const GplsProblem problem = random_problem(rng, 15, 7, 2, 0.9);
  const GplsSolution sol = solve_gpls(problem);
  CHECK(sol.converged);
  CHECK(sol.kkt_residual <= 1e-7);
}

TEST_CASE("kkt_certificate is tiny at the optimum and grows off it") {
  Rng rng(611);
  for (int trial = 0; trial < 5; ++trial) {
    const GplsProblem problem = random_problem(rng, 20, 6, 3, 1.1);
    GplsOptions options;
    options.tol = 1e-10;
    const GplsSolution sol = solve_gpls(problem, options);
    const double at_opt = kkt_certificate(problem, sol.b);
    CHECK(at_opt <= 1e-6);
    Matrix off = sol.b;
    off.array() += 0.05;
    CHECK(kkt_certificate(problem, off) > at_opt);
  }
}

TEST_CASE("kkt_certificate rejects nonconvex penalties") {
  Rng rng(613);
  const Matrix x = rng.gaussian_matrix(10, 4);
  const Matrix w = rng.gaussian_matrix(10, 2);
  const GplsProblem problem(x, w, PenaltySpec::group_mcp(1.0));
  CHECK_THROWS_AS(kkt_certificate(problem, Matrix::Zero(4, 2)), InputError);
}

TEST_CASE("warm start at the solution converges immediately") {
  Rng rng(617);
  const GplsProblem problem = random_problem(rng, 18, 6, 2, 0.7);
  const GplsSolution first = solve_gpls(problem);
  GplsOptions options;
  options.warm_start = first.b;
  const GplsSolution second = solve_gpls(problem, options);
  CHECK(second.converged);
  CHECK(second.iterations <= 2);
  CHECK((second.b - first.b).norm() < 1e-6);
}

TEST_CASE("right-rotating the response rotates the group lasso solution") {
  Rng rng(619);
  const Matrix x = rng.gaussian_matrix(20, 5);
  const Matrix w = rng.gaussian_matrix(20, 3);
  const Matrix q = oracles::random_orthonormal(rng, 3, 3);
  GplsOptions options;
  options.tol = 1e-10;
  const PenaltySpec pen = PenaltySpec::group_lasso(1.0);
  const GplsSolution plain = solve_gpls(GplsProblem(x, w, pen), options);
  const GplsSolution rotated = solve_gpls(GplsProblem(x, w * q, pen), options);
  CHECK((rotated.b - plain.b * q).norm() < 1e-6);
}

TEST_CASE("zero design columns: error without penalty, dead row with one") {
  Rng rng(621);
  Matrix x = rng.gaussian_matrix(10, 4);
  x.col(2).setZero();
  const Matrix w = rng.gaussian_matrix(10, 2);
  CHECK_THROWS_AS(solve_gpls(GplsProblem(x, w, PenaltySpec::group_lasso(0.0))), InputError);
  const GplsSolution sol = solve_gpls(GplsProblem(x, w, PenaltySpec::group_lasso(0.5)));
  CHECK(sol.b.row(2).norm() == 0.0);
  CHECK(sol.converged);
}

TEST_CASE("MCP solutions never do worse than their lasso warm start") {
  Rng rng(623);
  const Matrix x = rng.gaussian_matrix(30, 6);
  const Matrix w = rng.gaussian_matrix(30, 2);
  const PenaltySpec mcp = PenaltySpec::group_mcp(0.8, 3.0);
  const GplsSolution lasso = solve_gpls(GplsProblem(x, w, PenaltySpec::group_lasso(0.8)));
  const GplsSolution noncvx = solve_gpls(GplsProblem(x, w, mcp));
  CHECK(noncvx.objective <= oracles::group_objective(x, w, lasso.b, mcp) + 1e-9);
}

TEST_CASE("iteration cap marks the run unconverged") {
  Rng rng(627);
  const GplsProblem problem = random_problem(rng, 25, 10, 3, 0.2);
  GplsOptions options;
  options.max_iter = 1;
  options.tol = 1e-12;
  const GplsSolution sol = solve_gpls(problem, options);
  CHECK_FALSE(sol.converged);
  CHECK(sol.iterations == 1);
  CHECK(sol.kkt_residual > options.tol);
}

TEST_CASE("problem validation") {
  Rng rng(629);
  const Matrix x = rng.gaussian_matrix(10, 3);
  const Matrix w = rng.gaussian_matrix(9, 2);
  CHECK_THROWS_AS(GplsProblem(x, w, PenaltySpec::group_lasso(1.0)), InputError);
  GplsOptions options;
  options.warm_start = Matrix::Zero(4, 2);
  CHECK_THROWS_AS(
      solve_gpls(GplsProblem(x, rng.gaussian_matrix(10, 2), PenaltySpec::group_lasso(1.0)),
                 options),
      InputError);
}

TEST_CASE("default lambda and the grid endpoint follow their closed forms") {
  Matrix x = Matrix::Identity(4, 2);  // unit columns, p = 2
  const double expected_default = 4.0 * (1.0 + std::sqrt(4.0 * std::log(2.0)));
  CHECK(default_lambda(x, 1, 1.0) == doctest::Approx(expected_default).epsilon(1e-12));
  const double expected_grid = 2.0 * (1.0 + 2.0 * std::sqrt(std::log(2.0)));
  CHECK(lambda_grid_max(x, 1, 1.0) == doctest::Approx(expected_grid).epsilon(1e-12));

  // Scaling behavior: linear in sigma and in the largest column norm,
  // monotone in r and p.
  Rng rng(631);
  const Matrix z = rng.gaussian_matrix(12, 6);
  CHECK(default_lambda(z, 2, 3.0) == doctest::Approx(3.0 * default_lambda(z, 2, 1.0)));
  CHECK(default_lambda(2.0 * z, 2, 1.0) == doctest::Approx(2.0 * default_lambda(z, 2, 1.0)));
  CHECK(default_lambda(z, 3, 1.0) > default_lambda(z, 2, 1.0));
  CHECK(lambda_grid_max(z, 2, 1.0) < default_lambda(z, 2, 1.0));
  CHECK_THROWS_AS(default_lambda(z, 0, 1.0), InputError);
  CHECK_THROWS_AS(default_lambda(z.col(0), 1, 1.0), InputError);
}
