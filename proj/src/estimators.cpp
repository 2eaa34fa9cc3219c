#include "sarrs/estimators.hpp"

#include <chrono>
#include <cmath>
#include <utility>

#include "sarrs/rng.hpp"

namespace sarrs {

SplitResponses split_responses(const Matrix& y, double sigma, std::uint64_t seed) {
  require_finite(y, "response matrix");
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw InputError("splitting noise level must be a finite nonnegative real, got " +
                     std::to_string(sigma));
  SplitResponses out;
  if (sigma == 0.0) {
    out.copies = {y, y, y, y};
    return out;
  }
  Rng rng = Rng::derive(seed, 0x73706c69);  // fixed purpose tag
  const Matrix z1 = sigma * rng.gaussian_matrix(y.rows(), y.cols());
  const double s2 = sigma * std::sqrt(2.0);
  const Matrix z2 = s2 * rng.gaussian_matrix(y.rows(), y.cols());
  const Matrix z3 = s2 * rng.gaussian_matrix(y.rows(), y.cols());
  out.copies[0] = y + z1 + z2;
  out.copies[1] = y + z1 - z2;
  out.copies[2] = y - z1 + z3;
  out.copies[3] = y - z1 - z3;
  return out;
}

namespace {

struct Stage {
  // Responses routed to each stage plus the noise scale the init and the
  // penalty rules should assume for them.
  Matrix y_init, y_first, y_refine, y_final;
  double sigma_regression = 0.0;
  double sigma_used = 0.0;
  std::string sigma_source;
};

void check_fit_args(const Matrix& x, const Matrix& y, const SarrsConfig& config) {
  require_finite(x, "design matrix");
  require_finite(y, "response matrix");
  if (x.rows() != y.rows())
    throw InputError("design has " + std::to_string(x.rows()) + " rows but response has " +
                     std::to_string(y.rows()));
  if (x.rows() == 0 || x.cols() == 0 || y.cols() == 0)
    throw InputError("fit requires nonempty design and response");
  if (config.rank && *config.rank < 1)
    throw InputError("requested rank must be at least 1, got " + std::to_string(*config.rank));
  if (config.rank && *config.rank > std::min(y.cols(), x.cols()))
    throw InputError("requested rank " + std::to_string(*config.rank) +
                     " exceeds min(predictors, responses)");
  if (config.init == InitMethod::Provided) {
    if (!config.v0) throw InputError("init method Provided requires a v0 basis");
    if (config.v0->rows() != y.cols())
      throw InputError("provided v0 has " + std::to_string(config.v0->rows()) +
                       " rows, expected " + std::to_string(y.cols()));
  } else if (config.v0) {
    throw InputError("v0 may only be set with init method Provided");
  }
  if (config.splitting && !(config.splitting->sigma > 0.0))
    throw InputError("split mode requires a positive noise level");
  if (config.sigma && (!(*config.sigma > 0.0) || !std::isfinite(*config.sigma)))
    throw InputError("configured noise level must be positive and finite");
  if (!config.auto_lambda) config.penalty.validate();
}

Stage route_responses(const Matrix& y, const SarrsConfig& config, FitDiagnostics& diag) {
  Stage st;
  double sigma;
  if (config.sigma) {
    sigma = *config.sigma;
    st.sigma_source = "config";
  } else {
    sigma = estimate_sigma(y);
    st.sigma_source = "estimated";
  }
  st.sigma_used = sigma;
  if (config.splitting) {
    const SplitResponses split = split_responses(y, config.splitting->sigma, config.splitting->seed);
    st.y_init = split.copies[0];
    st.y_first = split.copies[1];
    st.y_refine = split.copies[2];
    st.y_final = split.copies[3];
    st.sigma_regression = 2.0 * config.splitting->sigma;
  } else {
    st.y_init = y;
    st.y_first = y;
    st.y_refine = y;
    st.y_final = y;
    st.sigma_regression = sigma;
  }
  diag.sigma_used = st.sigma_used;
  diag.sigma_source = st.sigma_source;
  return st;
}

// Resolve (r_hat, v0) per the configured init method. The init sees the
// routed init response and, in split mode, the doubled noise scale.
InitResult resolve_init(const Matrix& x, const Stage& st, const SarrsConfig& config) {
  const double sigma_init = config.splitting ? st.sigma_regression : st.sigma_used;
  switch (config.init) {
    case InitMethod::Provided: {
      InitResult r;
      r.v0 = *config.v0;
      if (config.rank && *config.rank != config.v0->cols())
        throw InputError("fixed rank " + std::to_string(*config.rank) +
                         " disagrees with the provided v0 (" +
                         std::to_string(config.v0->cols()) + " columns)");
      r.r_hat = static_cast<int>(config.v0->cols());
      r.method = "provided";
      // Orthonormality check mirrors subspace_overlap's tolerance.
      const Matrix dev =
          config.v0->transpose() * (*config.v0) - Matrix::Identity(r.r_hat, r.r_hat);
      if (dev.norm() > 1e-8) throw InputError("provided v0 must have orthonormal columns");
      return r;
    }
    case InitMethod::LowRank:
      return init_low_rank(x, st.y_init, sigma_init, config.eta, config.rank);
    case InitMethod::Sparse: {
      EtaRule rule = config.eta < 0.0 ? EtaRule{EtaFromSupport{}} : EtaRule{config.eta};
      const double lambda0 = config.init_lambda0 ? *config.init_lambda0 : -1.0;
      return init_sparse(x, st.y_init, sigma_init, lambda0, rule, config.rank, config.solver);
    }
  }
  throw InputError("unknown init method");
}

PenaltySpec resolve_penalty(const Matrix& x, int r_hat, const Stage& st,
                            const SarrsConfig& config) {
  if (!config.auto_lambda) return config.penalty;
  return config.penalty.at_level(default_lambda(x, r_hat, st.sigma_regression));
}

std::vector<int> support_of(const Matrix& b) {
  std::vector<int> out;
  for (Index j = 0; j < b.rows(); ++j)
    if (b.row(j).norm() > 0.0) out.push_back(static_cast<int>(j));
  return out;
}

}  // namespace

FitReport sarrs_fit(const Matrix& x, const Matrix& y, const SarrsConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  check_fit_args(x, y, config);

  FitReport report;
  Stage st = route_responses(y, config, report.diagnostics);
  const InitResult init = resolve_init(x, st, config);
  report.diagnostics.init_method = init.method;
  report.diagnostics.eta_used = init.eta_used;
  const PenaltySpec pen = resolve_penalty(x, init.r_hat, st, config);
  report.diagnostics.lambda_used = pen.lambda;

  // Pilot regression against the initial right basis.
  const GplsSolution first =
      solve_gpls(GplsProblem(x, st.y_first * init.v0, pen), config.solver);
  report.diagnostics.gpls_invocations++;
  report.diagnostics.gpls_sweeps.push_back(first.iterations);
  report.diagnostics.objective_trace.push_back(first.objective);

  // Left subspace of the fitted values.
  const Matrix fitted = x * first.b;
  if (fitted.isZero(0.0))
    throw NumericalError("pilot regression is identically zero at lambda = " +
                         std::to_string(pen.lambda) + "; the penalty level is too high");
  const ThinSvd fitted_svd = thin_svd(fitted, std::min<Index>(init.r_hat, std::min(fitted.rows(), fitted.cols())));
  Index usable = numerical_rank(fitted_svd.singular_values);
  if (usable == 0)
    throw NumericalError("pilot regression has numerical rank zero at lambda = " +
                         std::to_string(pen.lambda));
  if (usable < init.r_hat) report.diagnostics.rank_truncated = true;
  const Matrix left_basis = fitted_svd.u.leftCols(usable);

  // Refined right basis from the projected refinement response.
  const Matrix projected = left_basis * (left_basis.transpose() * st.y_refine);
  const ThinSvd proj_svd = thin_svd(projected, usable);
  const Matrix right_basis = proj_svd.v;

  // Final regression against the refined basis.
  const GplsSolution final_fit =
      solve_gpls(GplsProblem(x, st.y_final * right_basis, pen), config.solver);
  report.diagnostics.gpls_invocations++;
  report.diagnostics.gpls_sweeps.push_back(final_fit.iterations);
  report.diagnostics.objective_trace.push_back(final_fit.objective);

  report.b2 = final_fit.b;
  report.v1 = right_basis;
  report.rank_used = static_cast<int>(usable);
  report.a_hat = report.b2 * report.v1.transpose();
  report.support = support_of(report.b2);
  report.diagnostics.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

FitReport bsw_fit(const Matrix& x, const Matrix& y, const SarrsConfig& config) {
  constexpr int kMaxAlternations = 200;
  constexpr double kRelTol = 1e-4;

  const auto t0 = std::chrono::steady_clock::now();
  check_fit_args(x, y, config);

  FitReport report;
  Stage st = route_responses(y, config, report.diagnostics);
  const InitResult init = resolve_init(x, st, config);
  report.diagnostics.init_method = init.method;
  report.diagnostics.eta_used = init.eta_used;
  const PenaltySpec pen = resolve_penalty(x, init.r_hat, st, config);
  report.diagnostics.lambda_used = pen.lambda;

  // Alternations run on the first-stage response; Reuse mode makes that y.
  const Matrix& y_work = st.y_first;
  const double y_sq = y_work.squaredNorm();

  Matrix v = init.v0;
  Matrix b = Matrix::Zero(x.cols(), init.r_hat);
  double prev_obj = std::numeric_limits<double>::infinity();
  GplsOptions opts = config.solver;
  int alternations = 0;

  for (int t = 1; t <= kMaxAlternations; ++t) {
    const GplsSolution step = solve_gpls(GplsProblem(x, y_work * v, pen), opts);
    report.diagnostics.gpls_invocations++;
    report.diagnostics.gpls_sweeps.push_back(step.iterations);
    b = step.b;
    opts.warm_start = b;
    alternations = t;

    // Orthogonal Procrustes update of the right basis.
    const Matrix cross = y_work.transpose() * (x * b);
    if (cross.norm() > 0.0) {
      const ThinSvd svd = thin_svd(cross, init.r_hat);
      v = svd.u * svd.v.transpose();
    }

    // Joint objective at the updated pair; ||y - x b v^T||^2 expands to the
    // reduced residual plus the energy outside span(v).
    const double obj =
        0.5 * ((y_work * v - x * b).squaredNorm() + y_sq - (y_work * v).squaredNorm()) +
        penalty_value(b, pen);
    report.diagnostics.objective_trace.push_back(obj);
    if (std::abs(prev_obj - obj) / std::max(prev_obj, 1e-12) < kRelTol) {
      prev_obj = obj;
      break;
    }
    prev_obj = obj;
  }

  report.b2 = b;
  report.v1 = v;
  report.rank_used = init.r_hat;
  report.a_hat = b * v.transpose();
  report.support = support_of(b);
  report.diagnostics.alternations = alternations;
  report.diagnostics.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace sarrs
