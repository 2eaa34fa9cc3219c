#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "sarrs/matrix.hpp"
#include "sarrs/rng.hpp"

using namespace sarrs;

TEST_CASE("thin_svd recovers a diagonal spectrum exactly") {
  Matrix a = Matrix::Zero(3, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 2.0;
  const ThinSvd svd = thin_svd(a, 2);
  CHECK(svd.singular_values(0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(svd.singular_values(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(svd.u.rows() == 3);
  CHECK(svd.v.rows() == 2);
}

TEST_CASE("thin_svd factors reconstruct and are orthonormal") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Index rows = 3 + trial % 7;
    const Index cols = 2 + trial % 5;
    const Matrix a = rng.gaussian_matrix(rows, cols);
    const ThinSvd svd = thin_svd(a);
    const Index k = std::min(rows, cols);
    CHECK((svd.u.transpose() * svd.u - Matrix::Identity(k, k)).norm() < 1e-10);
    CHECK((svd.v.transpose() * svd.v - Matrix::Identity(k, k)).norm() < 1e-10);
    const Matrix rebuilt = svd.u * svd.singular_values.asDiagonal() * svd.v.transpose();
    CHECK((rebuilt - a).norm() < 1e-8 * std::max(1.0, a.norm()));
    for (Index i = 0; i + 1 < k; ++i)
      CHECK(svd.singular_values(i) >= svd.singular_values(i + 1));
  }
}

TEST_CASE("thin_svd singular values match an independent Jacobi eigensolver") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = rng.gaussian_matrix(8, 5);
    const ThinSvd svd = thin_svd(a);
    const Vector eigs = oracles::jacobi_eigenvalues(a.transpose() * a);
    for (Index i = 0; i < 5; ++i) {
      const double expected = std::sqrt(std::max(0.0, eigs(4 - i)));
      CHECK(svd.singular_values(i) == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("thin_svd sign convention is deterministic under column sign flips") {
  Rng rng(11);
  const Matrix a = rng.gaussian_matrix(6, 4);
  const ThinSvd first = thin_svd(a);
  const ThinSvd again = thin_svd(a);
  CHECK((first.u - again.u).norm() == 0.0);
  CHECK((first.v - again.v).norm() == 0.0);
  for (Index j = 0; j < first.v.cols(); ++j) {
    Index at = 0;
    first.v.col(j).cwiseAbs().maxCoeff(&at);
    CHECK(first.v(at, j) > 0.0);
  }
}

TEST_CASE("thin_svd transposition swaps the factors") {
  Rng rng(13);
  const Matrix a = rng.gaussian_matrix(7, 4);
  const ThinSvd fwd = thin_svd(a);
  const ThinSvd bwd = thin_svd(a.transpose());
  CHECK((fwd.singular_values - bwd.singular_values).norm() < 1e-10);
}

TEST_CASE("thin_svd rejects bad requests") {
  const Matrix a = Matrix::Identity(3, 2);
  CHECK_THROWS_AS(thin_svd(a, 0), InputError);
  CHECK_THROWS_AS(thin_svd(a, 3), InputError);
  Matrix bad = a;
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(thin_svd(bad, 1), InputError);
}

TEST_CASE("numerical_rank applies the relative cutoff") {
  Vector s(3);
  s << 1.0, 1e-6, 1e-14;
  CHECK(numerical_rank(s) == 2);
  Vector z = Vector::Zero(2);
  CHECK(numerical_rank(z) == 0);
}

TEST_CASE("schatten_norm_sq matches closed forms") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  CHECK(schatten_norm_sq(d, SchattenQ(1.0)) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(schatten_norm_sq(d, SchattenQ(2.0)) == doctest::Approx(5.0).epsilon(1e-12));
  // q = 1.5: (1 + 2^1.5)^(4/3)
  const double expected = std::pow(1.0 + std::pow(2.0, 1.5), 4.0 / 3.0);
  CHECK(schatten_norm_sq(d, SchattenQ(1.5)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("schatten_norm_sq is rotation invariant and 2-homogeneous") {
  Rng rng(17);
  const Matrix a = rng.gaussian_matrix(5, 4);
  const Matrix q = oracles::random_orthonormal(rng, 4, 4);
  for (double qq : {1.0, 1.3, 2.0}) {
    const double base = schatten_norm_sq(a, SchattenQ(qq));
    CHECK(schatten_norm_sq(a * q, SchattenQ(qq)) == doctest::Approx(base).epsilon(1e-9));
    CHECK(schatten_norm_sq(3.0 * a, SchattenQ(qq)) == doctest::Approx(9.0 * base).epsilon(1e-9));
  }
  CHECK_THROWS_AS(schatten_norm_sq(a, SchattenQ(0.5)), InputError);
  CHECK_THROWS_AS(schatten_norm_sq(a, SchattenQ(2.5)), InputError);
}

TEST_CASE("operator_norm agrees with power iteration") {
  Rng rng(19);
  for (int trial = 0; trial < 8; ++trial) {
    const Matrix a = rng.gaussian_matrix(6, 5);
    CHECK(operator_norm(a) ==
          doctest::Approx(oracles::power_operator_norm(a)).epsilon(1e-8));
  }
}

TEST_CASE("projection onto a coordinate subspace") {
  Matrix x = Matrix::Zero(3, 2);
  x(0, 0) = 1.0;
  x(1, 1) = 1.0;
  const Matrix p = projection_onto_column_space(x);
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = expected(1, 1) = 1.0;
  CHECK((p - expected).norm() < 1e-12);
}

TEST_CASE("projection is symmetric, idempotent, and fixes the column space") {
  Rng rng(23);
  const Matrix x = rng.gaussian_matrix(8, 3);
  const Matrix p = projection_onto_column_space(x);
  CHECK((p - p.transpose()).norm() < 1e-10);
  CHECK((p * p - p).norm() < 1e-10);
  CHECK((p * x - x).norm() < 1e-9 * x.norm());
  // Rank-deficient input: duplicated column does not inflate the projector.
  Matrix xdup(8, 4);
  xdup << x, x.col(0);
  CHECK((projection_onto_column_space(xdup) - p).norm() < 1e-9);
}

TEST_CASE("project_onto_column_space matches the explicit projector") {
  Rng rng(29);
  const Matrix x = rng.gaussian_matrix(9, 4);
  const Matrix y = rng.gaussian_matrix(9, 3);
  const Matrix direct = projection_onto_column_space(x) * y;
  CHECK((project_onto_column_space(x, y) - direct).norm() < 1e-10);
  CHECK_THROWS_AS(project_onto_column_space(x, rng.gaussian_matrix(5, 3)), InputError);
}

TEST_CASE("sparse_riesz_constants on an orthonormal design is (1, 1)") {
  const Matrix x = Matrix::Identity(5, 4);
  for (int k = 1; k <= 4; ++k) {
    const auto [lo, hi] = sparse_riesz_constants(x, k);
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sparse_riesz_constants equals exhaustive enumeration") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int p = 4 + trial % 4;
    const int k = 1 + trial % 3;
    const Matrix x = rng.gaussian_matrix(9, p);
    const auto [lo, hi] = sparse_riesz_constants(x, k);
    double want_lo = std::numeric_limits<double>::infinity();
    double want_hi = -want_lo;
    for (const auto& subset : oracles::subsets(p, k)) {
      Matrix sub(x.rows(), k);
      for (int i = 0; i < k; ++i) sub.col(i) = x.col(subset[i]);
      const Vector eigs = oracles::jacobi_eigenvalues(sub.transpose() * sub);
      want_lo = std::min(want_lo, eigs(0));
      want_hi = std::max(want_hi, eigs(k - 1));
    }
    CHECK(lo == doctest::Approx(want_lo).epsilon(1e-9));
    CHECK(hi == doctest::Approx(want_hi).epsilon(1e-9));
  }
}

TEST_CASE("sparse_riesz_constants widen with the subset size") {
  Rng rng(37);
  const Matrix x = rng.gaussian_matrix(10, 6);
  double prev_lo = std::numeric_limits<double>::infinity();
  double prev_hi = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const auto [lo, hi] = sparse_riesz_constants(x, k);
    CHECK(lo <= prev_lo + 1e-12);
    CHECK(hi >= prev_hi - 1e-12);
    prev_lo = lo;
    prev_hi = hi;
  }
}

TEST_CASE("sparse_riesz_constants enforces the enumeration cap") {
  Rng rng(41);
  const Matrix x = rng.gaussian_matrix(5, 40);
  CHECK_THROWS_AS(sparse_riesz_constants(x, 20, 1000), InputError);
  CHECK_THROWS_AS(sparse_riesz_constants(x, 0), InputError);
  CHECK_THROWS_AS(sparse_riesz_constants(x, 41), InputError);
}
