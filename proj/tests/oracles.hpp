// Independent reference implementations used to verify the library. These
// deliberately avoid the code paths under test: eigenvalues come from a
// hand-written Jacobi sweep, optima from grid search or proximal gradient
// with its own thresholding, norms from power iteration.
#pragma once

#include <functional>
#include <vector>

#include "sarrs/matrix.hpp"
#include "sarrs/penalty.hpp"
#include "sarrs/rng.hpp"

namespace oracles {

using sarrs::Index;
using sarrs::Matrix;
using sarrs::Vector;

// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations, ascending.
Vector jacobi_eigenvalues(Matrix a, int max_sweeps = 100);

// Largest singular value via power iteration on a^T a.
double power_operator_norm(const Matrix& a, int iters = 2000);

// 1-D minimizer of f over [lo, hi] by iterated grid refinement.
double grid_minimize(const std::function<double(double)>& f, double lo, double hi,
                     int points = 2001, int rounds = 6);

// Proximal gradient for the group lasso 0.5||w - x b||^2 + lambda sum ||b_j.||
// with its own row soft-thresholding; returns the final objective.
struct ProxGradResult {
  Matrix b;
  double objective;
};
ProxGradResult prox_gradient_group_lasso(const Matrix& x, const Matrix& w, double lambda,
                                         int iters);

// Penalized objective evaluated without the library's penalty_value.
double group_objective(const Matrix& x, const Matrix& w, const Matrix& b,
                       const sarrs::PenaltySpec& spec);

// Haar-ish random orthonormal columns (QR of a gaussian matrix).
Matrix random_orthonormal(sarrs::Rng& rng, Index rows, Index cols);

// All size-k subsets of {0..p-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int p, int k);

}  // namespace oracles
