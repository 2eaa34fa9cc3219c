#pragma once

#include <optional>
#include <vector>

#include "sarrs/matrix.hpp"
#include "sarrs/penalty.hpp"

namespace sarrs {

// Group-penalized least squares:
//   minimize over B   0.5 * ||W - X B||_F^2 + sum_j rho~(||B_j.||_2; lambda).
// X is n x p, W is n x r, B is p x r; penalty groups are the rows of B.
struct GplsProblem {
  Matrix x;
  Matrix w;
  PenaltySpec penalty;

  GplsProblem(Matrix x_in, Matrix w_in, PenaltySpec penalty_in);
};

struct GplsOptions {
  double tol = 1e-7;    // max row coefficient change per sweep
  int max_iter = 10000; // full coordinate sweeps
  std::optional<Matrix> warm_start;
};

struct GplsSolution {
  Matrix b;
  double objective;   // recomputed from scratch at the returned b
  int iterations;     // sweeps performed
  bool converged;
  double kkt_residual;  // last sweep's max row change; <= tol iff converged
  std::vector<double> objective_trace;  // objective after each sweep (index 0 = start)
};

// Cyclic block coordinate descent over rows with cached column norms and an
// incrementally maintained residual. Nonconvex penalties are warm-started from
// the group-lasso solution at the same lambda when no warm start is given.
GplsSolution solve_gpls(const GplsProblem& problem, const GplsOptions& options = {});

// Convex optimality certificate for a group-lasso problem: max over rows of
// the subgradient residual (active rows: ||g_j - lambda * B_j./||B_j.||||_2;
// inactive rows: (||g_j||_2 - lambda)_+ where g_j = X_.j^T (W - X B)).
// Zero exactly at the minimizer. InputError for non-lasso penalties.
double kkt_certificate(const GplsProblem& problem, const Matrix& b);

// Theory-guided default level: 4 * sigma * max_j ||X_.j||_2 * (sqrt(r) +
// sqrt(4 log p)). Requires p >= 2, r >= 1, sigma >= 0.
double default_lambda(const Matrix& x, int r, double sigma);

// Grid endpoint used by validation tuning: 2 * sigma * max_j ||X_.j||_2 *
// (sqrt(r) + 2 sqrt(log p)). Same preconditions.
double lambda_grid_max(const Matrix& x, int r, double sigma);

}  // namespace sarrs
