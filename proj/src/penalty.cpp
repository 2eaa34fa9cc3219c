#include "sarrs/penalty.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace sarrs {

const char* penalty_name(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::GroupLasso: return "grlasso";
    case PenaltyKind::GroupMcp: return "grmcp";
    case PenaltyKind::GroupScad: return "grscad";
    case PenaltyKind::CappedL1: return "cappedl1";
  }
  return "unknown";
}

PenaltyKind penalty_kind(const std::string& name) {
  for (PenaltyKind kind : {PenaltyKind::GroupLasso, PenaltyKind::GroupMcp, PenaltyKind::GroupScad,
                           PenaltyKind::CappedL1})
    if (name == penalty_name(kind)) return kind;
  throw InputError("unknown penalty \"" + name +
                   "\"; expected grlasso, grmcp, grscad, or cappedl1");
}

PenaltySpec PenaltySpec::group_lasso(double lambda) {
  PenaltySpec s{PenaltyKind::GroupLasso, lambda, 0.0};
  s.validate();
  return s;
}

PenaltySpec PenaltySpec::group_mcp(double lambda, double gamma) {
  PenaltySpec s{PenaltyKind::GroupMcp, lambda, gamma};
  s.validate();
  return s;
}

PenaltySpec PenaltySpec::group_scad(double lambda, double gamma) {
  PenaltySpec s{PenaltyKind::GroupScad, lambda, gamma};
  s.validate();
  return s;
}

PenaltySpec PenaltySpec::capped_l1(double lambda) { return capped_l1(lambda, lambda); }

PenaltySpec PenaltySpec::capped_l1(double lambda, double cap) {
  PenaltySpec s{PenaltyKind::CappedL1, lambda, cap};
  s.validate();
  return s;
}

PenaltySpec PenaltySpec::auto_level(PenaltyKind kind, std::optional<double> gamma,
                                    std::optional<double> cap) {
  PenaltySpec s;
  s.kind = kind;
  s.lambda = 0.0;
  switch (kind) {
    case PenaltyKind::GroupLasso: s.shape = 0.0; break;
    case PenaltyKind::GroupMcp: s.shape = gamma.value_or(3.0); break;
    case PenaltyKind::GroupScad: s.shape = gamma.value_or(3.7); break;
    case PenaltyKind::CappedL1: s.shape = cap.value_or(0.0); break;
  }
  return s;
}

PenaltySpec PenaltySpec::at_level(double new_lambda) const {
  PenaltySpec s = *this;
  s.lambda = new_lambda;
  if (s.kind == PenaltyKind::CappedL1 && !(s.shape > 0.0)) s.shape = new_lambda;
  s.validate();
  return s;
}

void PenaltySpec::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw InputError("penalty level must be a finite nonnegative real, got " +
                     std::to_string(lambda));
  switch (kind) {
    case PenaltyKind::GroupLasso:
      break;
    case PenaltyKind::GroupMcp:
      if (!(shape > 1.0) || !std::isfinite(shape))
        throw InputError("MCP concavity parameter must exceed 1, got " + std::to_string(shape));
      break;
    case PenaltyKind::GroupScad:
      if (!(shape > 2.0) || !std::isfinite(shape))
        throw InputError("SCAD concavity parameter must exceed 2, got " + std::to_string(shape));
      break;
    case PenaltyKind::CappedL1:
      if (!(shape > 0.0) || !std::isfinite(shape))
        throw InputError("capped-L1 cap must be positive, got " + std::to_string(shape));
      break;
  }
}

double scalar_penalty(double t, const PenaltySpec& spec) {
  if (t < 0.0) throw InputError("scalar penalty evaluated at a negative norm");
  const double lam = spec.lambda;
  switch (spec.kind) {
    case PenaltyKind::GroupLasso:
      return lam * t;
    case PenaltyKind::GroupMcp: {
      const double g = spec.shape;
      if (t <= g * lam) return lam * t - t * t / (2.0 * g);
      return 0.5 * g * lam * lam;
    }
    case PenaltyKind::GroupScad: {
      const double g = spec.shape;
      if (t <= lam) return lam * t;
      if (t <= g * lam) return (2.0 * g * lam * t - t * t - lam * lam) / (2.0 * (g - 1.0));
      return 0.5 * lam * lam * (g + 1.0);
    }
    case PenaltyKind::CappedL1:
      return lam * std::min(t, spec.shape);
  }
  return 0.0;
}

double penalty_value(const Matrix& b, const PenaltySpec& spec) {
  spec.validate();
  require_finite(b, "penalty argument");
  double acc = 0.0;
  for (Index j = 0; j < b.rows(); ++j) acc += scalar_penalty(b.row(j).norm(), spec);
  return acc;
}

namespace {

// Global minimum over the listed candidates of c/2 (s-t)^2 + rho~(s); exact
// because every piece of the objective is quadratic, so each piece attains its
// minimum at a clamped stationary point or a breakpoint. Ties pick smaller s.
double best_candidate(double t, double c, const PenaltySpec& spec, const double* cand, int n) {
  double best_s = 0.0;
  double best_f = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double s = cand[i];
    if (s < 0.0) continue;
    const double f = 0.5 * c * (s - t) * (s - t) + scalar_penalty(s, spec);
    if (f < best_f || (f == best_f && s < best_s)) {
      best_f = f;
      best_s = s;
    }
  }
  return best_s;
}

}  // namespace

double scalar_threshold(double t, double curvature, const PenaltySpec& spec) {
  spec.validate();
  if (!(curvature > 0.0) || !std::isfinite(curvature))
    throw InputError("threshold curvature must be a positive real, got " +
                     std::to_string(curvature));
  if (t < 0.0) throw InputError("threshold input must be a nonnegative norm");
  const double lam = spec.lambda;
  const double c = curvature;
  if (lam == 0.0) return t;
  switch (spec.kind) {
    case PenaltyKind::GroupLasso:
      return std::max(0.0, t - lam / c);
    case PenaltyKind::GroupMcp: {
      const double g = spec.shape;
      if (!(c * g > 1.0))
        throw InputError("MCP threshold is ill-posed: curvature * gamma = " +
                         std::to_string(c * g) + " must exceed 1");
      if (t <= lam / c) return 0.0;
      if (t <= g * lam) return (t - lam / c) / (1.0 - 1.0 / (c * g));
      return t;
    }
    case PenaltyKind::GroupScad: {
      const double g = spec.shape;
      // Piece stationary points: [0, lam] with slope lam; (lam, g*lam] with the
      // linearly decaying slope; (g*lam, inf) unpenalized.
      const double s1 = std::clamp(t - lam / c, 0.0, lam);
      const double denom = c * (g - 1.0) - 1.0;
      double cand[6];
      int n = 0;
      cand[n++] = 0.0;
      cand[n++] = s1;
      cand[n++] = lam;
      cand[n++] = g * lam;
      if (denom != 0.0) cand[n++] = std::clamp((c * t * (g - 1.0) - g * lam) / denom, lam, g * lam);
      if (t > g * lam) cand[n++] = t;
      return best_candidate(t, c, spec, cand, n);
    }
    case PenaltyKind::CappedL1: {
      const double a = spec.shape;
      double cand[4];
      int n = 0;
      cand[n++] = 0.0;
      cand[n++] = std::clamp(t - lam / c, 0.0, a);
      cand[n++] = a;
      if (t > a) cand[n++] = t;
      return best_candidate(t, c, spec, cand, n);
    }
  }
  return 0.0;
}

Vector group_threshold(const Vector& v, double curvature, const PenaltySpec& spec) {
  require_finite(v, "threshold input");
  const double t = v.norm();
  if (t == 0.0) return Vector::Zero(v.size());
  const double s = scalar_threshold(t, curvature, spec);
  if (s == 0.0) return Vector::Zero(v.size());
  return v * (s / t);
}

}  // namespace sarrs
