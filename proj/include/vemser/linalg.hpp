#pragma once

#include <Eigen/Dense>
#include <vector>

namespace vemser {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Default relative singular-value threshold for rank decisions.
inline constexpr double kRankTol = 1e-8;

VectorXd singular_values(const MatrixXd &m);

/// Number of singular values above rel_tol * sigma_max.
int numerical_rank(const MatrixXd &m, double rel_tol = kRankTol);

/// Orthonormal basis (as columns) of { c : c^T m = 0 }.
MatrixXd left_null_space(const MatrixXd &m, double rel_tol = kRankTol);

/// Orthonormal basis of the column span of m.
MatrixXd orthonormal_column_basis(const MatrixXd &m, double rel_tol = kRankTol);

/// Indices of columns of m, scanned left to right, that are not in the span
/// of previously accepted columns. Column norms are compared to the residual
/// after two rounds of Gram-Schmidt.
std::vector<int> independent_columns(const MatrixXd &m, double rel_tol = 1e-10);

/// Principal angles (radians, ascending) between span(a) and span(b).
VectorXd principal_angles(const MatrixXd &a, const MatrixXd &b);

/// sigma_max / sigma_min, or +inf for a singular matrix.
double condition_number(const MatrixXd &m);

} // namespace vemser
