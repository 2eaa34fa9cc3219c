#include "sarrs/init.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sarrs {

double estimate_sigma(const Matrix& y) {
  require_finite(y, "response matrix");
  if (y.rows() == 0 || y.cols() == 0) throw InputError("response matrix is empty");
  const ThinSvd svd = thin_svd(y);
  std::vector<double> nonzero;
  for (Index i = 0; i < svd.singular_values.size(); ++i)
    if (svd.singular_values(i) > 0.0) nonzero.push_back(svd.singular_values(i));
  if (nonzero.empty())
    throw InputError("noise level is undefined for an all-zero response matrix");
  // Singular values arrive sorted; median with even counts averaged.
  const std::size_t k = nonzero.size();
  const double med = (k % 2 == 1) ? nonzero[k / 2] : 0.5 * (nonzero[k / 2 - 1] + nonzero[k / 2]);
  return med / std::sqrt(static_cast<double>(std::max(y.rows(), y.cols())));
}

double default_low_rank_eta(Index n, Index m, Index p) {
  return std::sqrt(2.0 * static_cast<double>(m)) +
         std::sqrt(2.0 * static_cast<double>(std::min(n, p)));
}

double default_sparse_lambda0(const Matrix& x, Index m, double sigma) {
  return default_lambda(x, static_cast<int>(m), sigma);
}

namespace {

void check_init_args(const Matrix& x, const Matrix& y, double sigma) {
  require_finite(x, "design matrix");
  require_finite(y, "response matrix");
  if (x.rows() != y.rows())
    throw InputError("design has " + std::to_string(x.rows()) + " rows but response has " +
                     std::to_string(y.rows()));
  if (x.rows() == 0 || x.cols() == 0 || y.cols() == 0)
    throw InputError("initialization requires nonempty design and response");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InputError("initialization requires a positive finite noise level, got " +
                     std::to_string(sigma));
}

// Shared tail: threshold the singular values of `signal`, or honor a fixed
// rank, and return the leading right singular vectors.
InitResult rank_and_basis(const Matrix& signal, double sigma, double eta,
                          std::optional<int> fixed_rank, const char* method,
                          const char* eta_hint) {
  const ThinSvd svd = thin_svd(signal);
  InitResult out;
  out.method = method;
  if (fixed_rank) {
    if (*fixed_rank < 1)
      throw InputError("fixed rank must be at least 1, got " + std::to_string(*fixed_rank));
    if (*fixed_rank > svd.singular_values.size())
      throw InputError("fixed rank " + std::to_string(*fixed_rank) +
                       " exceeds the available " + std::to_string(svd.singular_values.size()) +
                       " singular directions");
    out.r_hat = *fixed_rank;
    out.eta_used = 0.0;
  } else {
    Index r = 0;
    const double cut = sigma * eta;
    for (Index i = 0; i < svd.singular_values.size(); ++i)
      if (svd.singular_values(i) >= cut) ++r;
    if (r == 0)
      throw NumericalError(std::string("rank estimate is zero: no singular value reaches "
                                       "sigma * eta = ") +
                           std::to_string(cut) + "; lower eta" + eta_hint);
    out.r_hat = static_cast<int>(r);
    out.eta_used = eta;
  }
  out.v0 = svd.v.leftCols(out.r_hat);
  return out;
}

}  // namespace

InitResult init_low_rank(const Matrix& x, const Matrix& y, double sigma, double eta,
                         std::optional<int> fixed_rank) {
  check_init_args(x, y, sigma);
  if (eta < 0.0) eta = default_low_rank_eta(x.rows(), y.cols(), x.cols());
  const Matrix projected = project_onto_column_space(x, y);
  if (projected.isZero(0.0))
    throw NumericalError("projected response is identically zero; no signal to initialize from");
  return rank_and_basis(projected, sigma, eta, fixed_rank, "lowrank",
                        " or check the noise level");
}

InitResult init_sparse(const Matrix& x, const Matrix& y, double sigma, double lambda0,
                       EtaRule eta, std::optional<int> fixed_rank, const GplsOptions& solver) {
  check_init_args(x, y, sigma);
  if (lambda0 < 0.0) lambda0 = default_sparse_lambda0(x, y.cols(), sigma);
  const GplsProblem problem(x, y, PenaltySpec::group_lasso(lambda0));
  const GplsSolution pilot = solve_gpls(problem, solver);

  int support = 0;
  for (Index j = 0; j < pilot.b.rows(); ++j)
    if (pilot.b.row(j).norm() > 0.0) ++support;
  if (support == 0)
    throw NumericalError("sparse initializer selected no rows at lambda0 = " +
                         std::to_string(lambda0) + "; lower lambda0");

  double eta_value;
  if (std::holds_alternative<double>(eta)) {
    eta_value = std::get<double>(eta);
    if (!(eta_value > 0.0))
      throw InputError("initialization threshold must be positive, got " +
                       std::to_string(eta_value));
  } else {
    const double m = static_cast<double>(y.cols());
    const double p = static_cast<double>(x.cols());
    eta_value = std::sqrt(static_cast<double>(support) * (m + 4.0 * std::log(p)));
  }

  InitResult out = rank_and_basis(x * pilot.b, sigma, eta_value, fixed_rank, "sparse",
                                  " or lambda0");
  out.lambda0_used = lambda0;
  return out;
}

double subspace_overlap(const Matrix& v, const Matrix& v0) {
  require_finite(v, "subspace basis");
  require_finite(v0, "subspace basis");
  if (v.rows() != v0.rows())
    throw InputError("subspace bases live in different ambient dimensions");
  if (v.cols() == 0 || v0.cols() == 0) throw InputError("subspace basis has no columns");
  const double dev_v = (v.transpose() * v - Matrix::Identity(v.cols(), v.cols())).norm();
  const double dev_v0 = (v0.transpose() * v0 - Matrix::Identity(v0.cols(), v0.cols())).norm();
  if (dev_v > 1e-8 || dev_v0 > 1e-8)
    throw InputError("subspace overlap requires orthonormal columns");
  const ThinSvd svd = thin_svd(v.transpose() * v0);
  return svd.singular_values(svd.singular_values.size() - 1);
}

}  // namespace sarrs
