#include "sarrs/gpls.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace sarrs {

GplsProblem::GplsProblem(Matrix x_in, Matrix w_in, PenaltySpec penalty_in)
    : x(std::move(x_in)), w(std::move(w_in)), penalty(std::move(penalty_in)) {
  require_finite(x, "design matrix");
  require_finite(w, "response matrix");
  if (x.rows() != w.rows())
    throw InputError("design has " + std::to_string(x.rows()) + " rows but response has " +
                     std::to_string(w.rows()));
  if (x.rows() == 0 || x.cols() == 0 || w.cols() == 0)
    throw InputError("group regression requires nonempty design and response");
  penalty.validate();
}

namespace {

GplsSolution run_bcd(const GplsProblem& pr, const PenaltySpec& pen, const GplsOptions& options,
                     const Matrix& b0) {
  const Index p = pr.x.cols();
  const Index r = pr.w.cols();

  Vector col_sq(p);
  for (Index j = 0; j < p; ++j) col_sq(j) = pr.x.col(j).squaredNorm();
  for (Index j = 0; j < p; ++j) {
    if (col_sq(j) == 0.0 && pen.lambda == 0.0)
      throw InputError("column " + std::to_string(j) +
                       " of the design is identically zero and the penalty level is 0; "
                       "its coefficients are unidentifiable");
  }
  if (pen.kind == PenaltyKind::GroupMcp) {
    for (Index j = 0; j < p; ++j)
      if (col_sq(j) > 0.0 && col_sq(j) * pen.shape <= 1.0)
        throw InputError("MCP update for column " + std::to_string(j) +
                         " is ill-posed: squared column norm * gamma = " +
                         std::to_string(col_sq(j) * pen.shape) + " must exceed 1");
  }

  Matrix b = b0;
  Matrix resid = pr.w - pr.x * b;

  GplsSolution sol;
  sol.objective_trace.push_back(0.5 * resid.squaredNorm() + penalty_value(b, pen));
  sol.converged = false;
  sol.kkt_residual = std::numeric_limits<double>::infinity();
  sol.iterations = 0;

  Vector u(r), delta(r);
  for (int sweep = 1; sweep <= options.max_iter; ++sweep) {
    double max_change = 0.0;
    for (Index j = 0; j < p; ++j) {
      if (col_sq(j) == 0.0) {
        b.row(j).setZero();
        continue;
      }
      u = b.row(j).transpose() + resid.transpose() * pr.x.col(j) / col_sq(j);
      Vector bnew = group_threshold(u, col_sq(j), pen);
      delta = bnew - b.row(j).transpose();
      const double step = delta.cwiseAbs().maxCoeff();
      if (step > 0.0) {
        resid.noalias() -= pr.x.col(j) * delta.transpose();
        b.row(j) = bnew.transpose();
        max_change = std::max(max_change, step);
      }
    }
    if (!b.allFinite())
      throw NumericalError("group regression diverged at sweep " + std::to_string(sweep));
    sol.objective_trace.push_back(0.5 * resid.squaredNorm() + penalty_value(b, pen));
    sol.iterations = sweep;
    sol.kkt_residual = max_change;
    if (max_change <= options.tol) {
      sol.converged = true;
      break;
    }
  }

  sol.b = std::move(b);
  sol.objective = 0.5 * (pr.w - pr.x * sol.b).squaredNorm() + penalty_value(sol.b, pen);
  return sol;
}

}  // namespace

GplsSolution solve_gpls(const GplsProblem& problem, const GplsOptions& options) {
  if (!(options.tol > 0.0))
    throw InputError("solver tolerance must be positive, got " + std::to_string(options.tol));
  if (options.max_iter < 1)
    throw InputError("solver iteration cap must be at least 1, got " +
                     std::to_string(options.max_iter));

  const Index p = problem.x.cols();
  const Index r = problem.w.cols();
  Matrix b0;
  if (options.warm_start) {
    if (options.warm_start->rows() != p || options.warm_start->cols() != r)
      throw InputError("warm start is " + std::to_string(options.warm_start->rows()) + "x" +
                       std::to_string(options.warm_start->cols()) + ", expected " +
                       std::to_string(p) + "x" + std::to_string(r));
    require_finite(*options.warm_start, "warm start");
    b0 = *options.warm_start;
  } else if (problem.penalty.kind != PenaltyKind::GroupLasso) {
    // Nonconvex runs start from the convex solution at the same level.
    GplsOptions convex_opts = options;
    convex_opts.warm_start.reset();
    GplsProblem convex(problem.x, problem.w,
                       PenaltySpec::group_lasso(problem.penalty.lambda));
    b0 = run_bcd(convex, convex.penalty, convex_opts, Matrix::Zero(p, r)).b;
  } else {
    b0 = Matrix::Zero(p, r);
  }

  return run_bcd(problem, problem.penalty, options, b0);
}

double kkt_certificate(const GplsProblem& problem, const Matrix& b) {
  if (problem.penalty.kind != PenaltyKind::GroupLasso)
    throw InputError("optimality certificate is defined for the group lasso only");
  if (b.rows() != problem.x.cols() || b.cols() != problem.w.cols())
    throw InputError("certificate coefficient matrix has the wrong shape");
  require_finite(b, "certificate argument");
  const double lam = problem.penalty.lambda;
  const Matrix resid = problem.w - problem.x * b;
  double worst = 0.0;
  for (Index j = 0; j < problem.x.cols(); ++j) {
    const Vector grad = problem.x.col(j).transpose() * resid;
    const double row_norm = b.row(j).norm();
    double viol;
    if (row_norm > 0.0) {
      viol = (grad - (lam / row_norm) * b.row(j).transpose()).norm();
    } else {
      viol = std::max(0.0, grad.norm() - lam);
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

namespace {

double max_column_norm(const Matrix& x) {
  double best = 0.0;
  for (Index j = 0; j < x.cols(); ++j) best = std::max(best, x.col(j).norm());
  return best;
}

void check_lambda_rule_args(const Matrix& x, int r, double sigma) {
  require_finite(x, "design matrix");
  if (x.cols() < 2) throw InputError("penalty level rules require at least 2 predictors");
  if (r < 1) throw InputError("penalty level rules require rank >= 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw InputError("noise level must be a finite nonnegative real");
}

}  // namespace

double default_lambda(const Matrix& x, int r, double sigma) {
  check_lambda_rule_args(x, r, sigma);
  const double p = static_cast<double>(x.cols());
  return 4.0 * sigma * max_column_norm(x) * (std::sqrt(static_cast<double>(r)) +
                                             std::sqrt(4.0 * std::log(p)));
}

double lambda_grid_max(const Matrix& x, int r, double sigma) {
  check_lambda_rule_args(x, r, sigma);
  const double p = static_cast<double>(x.cols());
  return 2.0 * sigma * max_column_norm(x) * (std::sqrt(static_cast<double>(r)) +
                                             2.0 * std::sqrt(std::log(p)));
}

}  // namespace sarrs
