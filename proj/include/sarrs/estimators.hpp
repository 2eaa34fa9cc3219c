#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sarrs/gpls.hpp"
#include "sarrs/init.hpp"
#include "sarrs/matrix.hpp"
#include "sarrs/penalty.hpp"

namespace sarrs {

enum class InitMethod { LowRank, Sparse, Provided };

// How the fit obtains its responses. Reuse feeds the observed y to every
// stage. Split draws auxiliary noise and hands each stage an independent copy
// whose noise scale is 2 * sigma.
struct SplitMode {
  double sigma = 0.0;  // must be > 0
  std::uint64_t seed = 0;
};

struct SarrsConfig {
  std::optional<int> rank;          // fixed rank; nullopt = estimate during init
  InitMethod init = InitMethod::LowRank;
  std::optional<Matrix> v0;         // required iff init == Provided
  PenaltySpec penalty;              // penalty.lambda ignored when auto_lambda
  bool auto_lambda = false;         // lambda from the default rule at the estimated rank
  std::optional<double> sigma;      // noise level; nullopt = estimate from the response
  std::optional<SplitMode> splitting;  // nullopt = Reuse
  double eta = -1.0;                // init threshold; < 0 = default rule
  std::optional<double> init_lambda0;  // sparse init level; nullopt = default rule
  GplsOptions solver;
};

struct FitDiagnostics {
  int gpls_invocations = 0;      // group-regression solves performed by the fit
  std::vector<int> gpls_sweeps;  // per-solve sweep counts, in call order
  int alternations = 0;          // alternating fits only; 0 for the two-stage path
  std::vector<double> objective_trace;  // per-solve objective (joint objective for bsw)
  double lambda_used = 0.0;
  double sigma_used = 0.0;
  std::string sigma_source;      // "config" or "estimated"
  std::string init_method;
  double eta_used = 0.0;
  bool rank_truncated = false;   // first-pass fit had lower rank than requested
  double elapsed_seconds = 0.0;
};

struct FitReport {
  Matrix a_hat;              // p x m coefficient estimate, equals b2 * v1^T
  Matrix b2;                 // p x rank_used reduced coefficients
  Matrix v1;                 // m x rank_used orthonormal right factor
  int rank_used = 0;
  std::vector<int> support;  // sorted indices of nonzero rows of b2
  FitDiagnostics diagnostics;
};

// Four response copies built from y plus auxiliary gaussian noise. Each copy
// has total noise scale 2 * sigma around the signal, the copies are mutually
// independent given the signal, and copy - y has variance 3 * sigma^2.
// Copy roles: 0 = initialization, 1 = first regression, 2 = subspace
// refinement, 3 = final regression. sigma = 0 returns four copies of y.
struct SplitResponses {
  std::array<Matrix, 4> copies;
};
SplitResponses split_responses(const Matrix& y, double sigma, std::uint64_t seed);

// Two-stage estimator: pilot group regression against y * v0, left-subspace
// extraction from the fitted values, right-basis refinement, and one final
// group regression. Exactly two group-regression solves on the fit path.
FitReport sarrs_fit(const Matrix& x, const Matrix& y, const SarrsConfig& config);

// Alternating baseline: repeat (group regression against y * v, orthogonal
// Procrustes update of v from y^T x b) until the joint objective
// 0.5 * ||y - x b v^T||_F^2 + rho(b) is stationary. diagnostics.alternations
// counts group-regression solves.
FitReport bsw_fit(const Matrix& x, const Matrix& y, const SarrsConfig& config);

}  // namespace sarrs
