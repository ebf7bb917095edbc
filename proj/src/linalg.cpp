#include "vemser/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vemser {

VectorXd singular_values(const MatrixXd &m) {
  if (m.size() == 0)
    return VectorXd();
  Eigen::BDCSVD<MatrixXd> svd(m);
  return svd.singularValues();
}

int numerical_rank(const MatrixXd &m, double rel_tol) {
  const VectorXd s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0)
    return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0))
      ++r;
  return r;
}

MatrixXd left_null_space(const MatrixXd &m, double rel_tol) {
  const Eigen::Index rows = m.rows();
  if (m.cols() == 0)
    return MatrixXd::Identity(rows, rows);
  Eigen::BDCSVD<MatrixXd> svd(m, Eigen::ComputeFullU);
  const VectorXd s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0.0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > rel_tol * s(0))
        ++r;
  return svd.matrixU().rightCols(rows - r);
}

MatrixXd orthonormal_column_basis(const MatrixXd &m, double rel_tol) {
  if (m.cols() == 0)
    return MatrixXd(m.rows(), 0);
  Eigen::BDCSVD<MatrixXd> svd(m, Eigen::ComputeThinU);
  const VectorXd s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0.0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > rel_tol * s(0))
        ++r;
  return svd.matrixU().leftCols(r);
}

std::vector<int> independent_columns(const MatrixXd &m, double rel_tol) {
  std::vector<int> kept;
  MatrixXd q(m.rows(), 0);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    VectorXd v = m.col(j);
    const double norm0 = v.norm();
    if (norm0 == 0.0)
      continue;
    for (int pass = 0; pass < 2; ++pass)
      v -= q * (q.transpose() * v);
    const double res = v.norm();
    if (res > rel_tol * norm0) {
      q.conservativeResize(Eigen::NoChange, q.cols() + 1);
      q.col(q.cols() - 1) = v / res;
      kept.push_back(static_cast<int>(j));
    }
  }
  return kept;
}

VectorXd principal_angles(const MatrixXd &a, const MatrixXd &b) {
  MatrixXd qa = orthonormal_column_basis(a, 1e-12);
  MatrixXd qb = orthonormal_column_basis(b, 1e-12);
  if (qa.cols() == 0 || qb.cols() == 0)
    return VectorXd();
  if (qa.cols() < qb.cols())
    std::swap(qa, qb);
  // qb is the smaller subspace; cosines from the projection, sines from the
  // residual. Small angles use the sine to keep full relative accuracy.
  const MatrixXd proj = qa.transpose() * qb;
  const VectorXd c = singular_values(proj);                  // descending
  VectorXd sn = singular_values(qb - qa * proj);             // descending
  const Eigen::Index n = qb.cols();
  if (sn.size() < n) {
    VectorXd padded = VectorXd::Zero(n);
    padded.head(sn.size()) = sn;
    sn = padded;
  }
  VectorXd angles(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ci = std::clamp(c(i), 0.0, 1.0);
    const double si = std::clamp(sn(n - 1 - i), 0.0, 1.0);
    angles(i) = ci > std::sqrt(0.5) ? std::asin(si) : std::acos(ci);
  }
  std::sort(angles.data(), angles.data() + angles.size());
  return angles;
}

double condition_number(const MatrixXd &m) {
  const VectorXd s = singular_values(m);
  if (s.size() == 0)
    return 1.0;
  const double smin = s(s.size() - 1);
  if (smin <= 0.0)
    return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

} // namespace vemser
