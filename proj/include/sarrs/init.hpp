#pragma once

#include <optional>
#include <string>
#include <variant>

#include "sarrs/gpls.hpp"
#include "sarrs/matrix.hpp"

namespace sarrs {

struct InitResult {
  int r_hat = 0;
  Matrix v0;               // m x r_hat, orthonormal columns
  std::string method;      // "lowrank" or "sparse"
  double eta_used = 0.0;   // singular-value threshold actually applied (0 when rank was fixed)
  double lambda0_used = 0.0;  // sparse init only
};

// Median of the nonzero singular values of y divided by sqrt(max(n, m)).
// Even counts average the two middle values. InputError on y == 0.
double estimate_sigma(const Matrix& y);

// Default threshold for the projection-based initializer:
// sqrt(2 m) + sqrt(2 min(n, p)).
double default_low_rank_eta(Index n, Index m, Index p);

// Default penalty level for the sparse initializer:
// 4 * sigma * max_j ||X_.j||_2 * (sqrt(m) + sqrt(4 log p)).
double default_sparse_lambda0(const Matrix& x, Index m, double sigma);

// Threshold rule for the sparse initializer: either a fixed eta or the
// support-adaptive rule sqrt(s0 * (m + 4 log p)) with s0 = |supp(A0)|.
struct EtaFromSupport {};
using EtaRule = std::variant<double, EtaFromSupport>;

// Projection initializer: rank = #{ j : sigma_j(P_X y) >= sigma * eta }
// (inclusive), v0 = leading right singular vectors of P_X y. eta < 0 selects
// the default rule. fixed_rank overrides thresholding entirely.
// NumericalError when no singular value clears the threshold.
InitResult init_low_rank(const Matrix& x, const Matrix& y, double sigma, double eta = -1.0,
                         std::optional<int> fixed_rank = std::nullopt);

// Sparse initializer: A0 = group lasso at lambda0 on the full m-column
// response, rank from the singular values of X A0 against sigma * eta, v0 from
// the same SVD. lambda0 < 0 selects the default rule. NumericalError when A0
// is identically zero or no singular value clears the threshold.
InitResult init_sparse(const Matrix& x, const Matrix& y, double sigma,
                       double lambda0 = -1.0, EtaRule eta = EtaFromSupport{},
                       std::optional<int> fixed_rank = std::nullopt,
                       const GplsOptions& solver = {});

// Smallest singular value of v^T v0 for orthonormal-column inputs; 1 when the
// spans coincide, 0 when some direction of v is orthogonal to span(v0).
double subspace_overlap(const Matrix& v, const Matrix& v0);

}  // namespace sarrs
