#include "sarrs/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace sarrs {

SchattenQ::SchattenQ(double q_in) : q(q_in) {
  if (!(q >= 1.0 && q <= 2.0))
    throw InputError("Schatten exponent must lie in [1, 2], got " + std::to_string(q_in));
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite())
    throw InputError(std::string(what) + " contains a non-finite entry");
}

namespace {

// Flip signs so each right singular vector has its largest-magnitude entry
// positive (first index wins ties); keeps u*diag(s)*v^T unchanged.
void canonicalize_signs(Matrix& u, Matrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    Index at = 0;
    v.col(j).cwiseAbs().maxCoeff(&at);
    if (v(at, j) < 0.0) {
      v.col(j) = -v.col(j);
      u.col(j) = -u.col(j);
    }
  }
}

}  // namespace

ThinSvd thin_svd(const Matrix& m, Index k) {
  require_finite(m, "svd input");
  const Index kmax = std::min(m.rows(), m.cols());
  if (m.rows() == 0 || m.cols() == 0) throw InputError("svd input has a zero dimension");
  if (k < 1 || k > kmax)
    throw InputError("requested " + std::to_string(k) + " singular triplets, valid range is [1, " +
                     std::to_string(kmax) + "]");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ThinSvd out;
  out.u = svd.matrixU().leftCols(k);
  out.singular_values = svd.singularValues().head(k);
  out.v = svd.matrixV().leftCols(k);
  canonicalize_signs(out.u, out.v);
  return out;
}

ThinSvd thin_svd(const Matrix& m) { return thin_svd(m, std::min(m.rows(), m.cols())); }

Index numerical_rank(const Vector& singular_values) {
  if (singular_values.size() == 0) return 0;
  const double cutoff = kRankRelTol * singular_values(0);
  Index r = 0;
  for (Index i = 0; i < singular_values.size(); ++i)
    if (singular_values(i) > cutoff && singular_values(i) > 0.0) ++r;
  return r;
}

double schatten_norm_sq(const Matrix& m, SchattenQ q) {
  require_finite(m, "schatten input");
  if (q.q == 2.0) return m.squaredNorm();
  Eigen::BDCSVD<Matrix> svd(m);
  double acc = 0.0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    acc += std::pow(svd.singularValues()(i), q.q);
  return std::pow(acc, 2.0 / q.q);
}

double operator_norm(const Matrix& m) {
  require_finite(m, "operator norm input");
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

Matrix projection_onto_column_space(const Matrix& x) {
  require_finite(x, "projection input");
  if (x.rows() == 0 || x.cols() == 0) throw InputError("projection input has a zero dimension");
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU);
  const Index r = numerical_rank(svd.singularValues());
  if (r == 0) return Matrix::Zero(x.rows(), x.rows());
  const auto basis = svd.matrixU().leftCols(r);
  return basis * basis.transpose();
}

Matrix project_onto_column_space(const Matrix& x, const Matrix& y) {
  require_finite(x, "projection input");
  require_finite(y, "projection target");
  if (x.rows() != y.rows())
    throw InputError("projection target has " + std::to_string(y.rows()) +
                     " rows, expected " + std::to_string(x.rows()));
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU);
  const Index r = numerical_rank(svd.singularValues());
  if (r == 0) return Matrix::Zero(y.rows(), y.cols());
  const auto basis = svd.matrixU().leftCols(r);
  return basis * (basis.transpose() * y);
}

namespace {

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (c > 4 * cap) return 4 * cap + 1;  // avoid overflow, caller only compares to cap
    c = c * (n - k + i) / i;
  }
  return c;
}

}  // namespace

std::pair<double, double> sparse_riesz_constants(const Matrix& x, int k, std::uint64_t subset_cap) {
  require_finite(x, "design matrix");
  const Index p = x.cols();
  if (k < 1 || k > p)
    throw InputError("subset size " + std::to_string(k) + " must lie in [1, " + std::to_string(p) +
                     "]");
  const std::uint64_t count =
      binomial_capped(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(k), subset_cap);
  if (count > subset_cap)
    throw InputError("C(" + std::to_string(p) + ", " + std::to_string(k) +
                     ") column subsets exceed the enumeration cap of " + std::to_string(subset_cap));

  std::vector<Index> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  Matrix sub(x.rows(), k);
  Matrix gram(k, k);
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  while (true) {
    for (int i = 0; i < k; ++i) sub.col(i) = x.col(idx[i]);
    gram.noalias() = sub.transpose() * sub;
    eig.compute(gram, Eigen::EigenvaluesOnly);
    lo = std::min(lo, eig.eigenvalues()(0));
    hi = std::max(hi, eig.eigenvalues()(k - 1));
    // next k-combination of {0..p-1} in lexicographic order
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == p - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return {lo, hi};
}

}  // namespace sarrs
