#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>

#include "sarrs/errors.hpp"

namespace sarrs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Relative cutoff under which trailing singular values count as zero.
inline constexpr double kRankRelTol = 1e-12;

// Schatten exponent restricted to [1, 2] (1 = nuclear, 2 = Frobenius).
struct SchattenQ {
  double q;
  explicit SchattenQ(double q_in);
};

// Economy-size SVD. u has orthonormal columns (rows x k), v likewise
// (cols x k), singular_values is nonincreasing. Deterministic sign
// convention: each column of v has its largest-magnitude entry positive.
struct ThinSvd {
  Matrix u;
  Vector singular_values;
  Matrix v;
};

// Throws InputError naming `what` if any entry is NaN/Inf.
void require_finite(const Matrix& m, const char* what);

// Leading k singular triplets of m. Requires 1 <= k <= min(rows, cols).
ThinSvd thin_svd(const Matrix& m, Index k);

// Full economy SVD (k = min(rows, cols)).
ThinSvd thin_svd(const Matrix& m);

// Number of singular values above kRankRelTol * largest.
Index numerical_rank(const Vector& singular_values);

// Squared Schatten-q norm: (sum_i sigma_i^q)^(2/q).
double schatten_norm_sq(const Matrix& m, SchattenQ q);

// Largest singular value.
double operator_norm(const Matrix& m);

// Orthogonal projector onto the column space of x (rows x rows, symmetric,
// idempotent). Uses the numerical rank of x.
Matrix projection_onto_column_space(const Matrix& x);

// Applies the projector onto col(x) to y without forming the rows x rows
// projector; same result as projection_onto_column_space(x) * y.
Matrix project_onto_column_space(const Matrix& x, const Matrix& y);

// Extremal eigenvalues of k-column Gram submatrices of x: returns
// (kappa_minus^2, kappa_plus^2) = (min over size-k column subsets of the
// smallest eigenvalue, max of the largest). Enumerates all C(p, k) subsets;
// throws InputError when that count exceeds subset_cap.
std::pair<double, double> sparse_riesz_constants(const Matrix& x, int k,
                                                 std::uint64_t subset_cap = 1000000);

}  // namespace sarrs
