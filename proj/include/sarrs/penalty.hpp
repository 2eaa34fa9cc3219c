#pragma once

#include <optional>
#include <string>

#include "sarrs/matrix.hpp"

namespace sarrs {

enum class PenaltyKind { GroupLasso, GroupMcp, GroupScad, CappedL1 };

const char* penalty_name(PenaltyKind kind);
PenaltyKind penalty_kind(const std::string& name);  // inverse; throws InputError

// Row-wise group penalty rho(B; lambda) = sum_j rho~(||B_j.||_2; lambda).
// `shape` is the concavity parameter: gamma for MCP (> 1) and SCAD (> 2),
// the cap a for capped-L1 (> 0); unused for the group lasso.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::GroupLasso;
  double lambda = 0.0;
  double shape = 0.0;

  static PenaltySpec group_lasso(double lambda);
  static PenaltySpec group_mcp(double lambda, double gamma = 3.0);
  static PenaltySpec group_scad(double lambda, double gamma = 3.7);
  // Default cap a = lambda.
  static PenaltySpec capped_l1(double lambda);
  static PenaltySpec capped_l1(double lambda, double cap);

  // Spec whose level is filled in later (automatic rules, tuning scans).
  // Shape defaults are applied here; a capped-L1 spec without an explicit cap
  // keeps shape = 0 so at_level can track the resolved level. Not validated
  // until at_level runs.
  static PenaltySpec auto_level(PenaltyKind kind, std::optional<double> gamma = std::nullopt,
                                std::optional<double> cap = std::nullopt);

  // Copy with the level set; a capped-L1 cap left at the tracking sentinel
  // becomes the level itself. Validates the result.
  PenaltySpec at_level(double new_lambda) const;

  void validate() const;  // throws InputError on out-of-range parameters
};

// Scalar penalty rho~(t; lambda) at t = ||row||_2 >= 0.
double scalar_penalty(double t, const PenaltySpec& spec);

// rho(B; lambda): sum of scalar_penalty over the rows of b.
double penalty_value(const Matrix& b, const PenaltySpec& spec);

// Exact minimizer of  curvature/2 * (s - t)^2 + rho~(s; lambda)  over s >= 0.
// Closed form for lasso and MCP (MCP requires curvature * gamma > 1, else
// InputError); SCAD and capped-L1 enumerate the piecewise-quadratic candidates
// so the returned point is a global minimizer. Smallest-magnitude tie-break.
double scalar_threshold(double t, double curvature, const PenaltySpec& spec);

// Group proximal step: argmin over b of curvature/2 * ||b - v||^2 +
// rho~(||b||_2; lambda). Scales v by scalar_threshold(||v||)/||v||.
Vector group_threshold(const Vector& v, double curvature, const PenaltySpec& spec);

}  // namespace sarrs
