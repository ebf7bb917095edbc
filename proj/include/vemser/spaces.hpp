#pragma once

#include "vemser/polynomial.hpp"

#include <string>
#include <vector>

namespace vemser {

/// Named polynomial vector spaces. Members live in scaled coordinates.
enum class SpaceName {
  PkVec,    // (P_k)^d
  RTk,      // (P_k)^d + xi P_k^hom
  BDMk,     // (P_k)^d, k >= 1
  N1k,      // 2D: (P_k)^2 + xi^perp P_k^hom; 3D: (P_k)^3 + xi ^ (P_k^hom)^3
  N2k,      // (P_k)^d
  XPk,      // xi P_k
  XPerpPk,  // xi^perp P_k (2D)
  XWedgePk, // xi ^ (P_k)^3 (3D), redundancy removed
  GradPk,   // grad P_k, constants dropped
  BrotPk,   // brot P_k (2D), constants dropped
  CurlPk,   // curl (P_k)^3 (3D), redundancy removed
  Custom,
};

std::string to_string(SpaceName n);
SpaceName space_from_string(const std::string &s);

struct SpaceBasis {
  SpaceName name = SpaceName::Custom;
  int k = 0;
  int d = 2;
  std::vector<PolyVector> members;
  /// slices[i] is the first member of slice i; slices.back() == members.size().
  /// Slices group members by the homogeneous degree that produced them.
  std::vector<int> slices;

  int size() const { return static_cast<int>(members.size()); }
  int degree() const;
  /// Columns are members flattened at degree n (default: degree()).
  MatrixXd matrix(int n = -1) const;
  /// Members of slices [0, nslices).
  int prefix_size(int nslices) const { return slices[std::min<int>(nslices, slices.size() - 1)]; }
};

/// Scalar monomials of degree <= k (or exactly k when homogeneous is set).
std::vector<PolyScalar> scalar_monomials(int d, int k, bool homogeneous = false);

/// Expected dimension of a named space; used for sanity checks and reports.
int space_dim(SpaceName name, int k, int d);

SpaceBasis build_basis(SpaceName name, int k, int d);
SpaceBasis custom_basis(int d, std::vector<PolyVector> members);

/// q with rot2(xperp_mul(q)) = p.
PolyScalar solve_rot_xperp(const PolyScalar &p);
/// q with div(x_mul(q)) = p.
PolyScalar solve_div_x(const PolyScalar &p);

} // namespace vemser
