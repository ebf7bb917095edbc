#pragma once

#include "vemser/dofsets.hpp"
#include "vemser/linalg.hpp"

#include <string>
#include <vector>

namespace vemser {

enum class Strategy { ConvexEta, Lazy, Stingy, Systematic };

std::string to_string(Strategy s);
/// Accepts convex, lazy, stingy, systematic (and the enum spellings).
Strategy strategy_from_string(const std::string &s);
/// ConvexEta on convex elements, Systematic otherwise.
Strategy default_strategy(const Element &e);

struct ReductionOptions {
  double rank_tol = kRankTol;
  CoverOptions cover;
  /// Condition number of the normal equations above which a warning is recorded.
  double cond_warn = 1e12;
};

/// Basis of Z as coefficient vectors (columns) in the S basis, plus the
/// fields themselves.
struct KernelSpace {
  MatrixXd coeffs;
  std::vector<PolyVector> fields;
  int dim = 0;
  std::string tag; ///< formula, nullspace or cups
};

/// { p in S : F_1(p) = ... = F_M(p) = 0 } from the first M columns of D.
KernelSpace kernel_nullspace(const MatrixXd &D, int M, double tol = kRankTol);
/// Same, with the fields rebuilt from the S basis.
KernelSpace kernel_nullspace(const MatrixXd &D, int M, const SpaceBasis &s, double tol = kRankTol);

/// Predicted dim Z. Face3D has a closed form only on tetrahedra.
int zdim_formula(Family f, int k, int eta, bool tetrahedron = false);

/// curl of the cup fields b^(-i) p n_i on a tetrahedron, p in P_{k-2};
/// coefficients are taken in the given S basis (default (P_k)^3).
KernelSpace tetra_cups(const Element &tet, int k);
KernelSpace tetra_cups(const Element &tet, int k, const SpaceBasis &s);

/// Face-level choice for Edge3D: the face's own DOFs, its tangential
/// polynomial space and the selected subset.
struct FaceSelection {
  int face = 0;
  int eta = 0;
  std::vector<int> dofs;     ///< layout indices: edges and brot first, then X moments
  int kept = 0;              ///< leading entries of dofs that are always kept
  std::vector<int> selected; ///< layout indices kept after the face stage
  std::vector<int> dropped;
  SpaceBasis basis; ///< tangential space on the face, in element coordinates
  MatrixXd D;       ///< basis.size() x dofs.size()
};

struct Selection {
  Strategy strategy = Strategy::Systematic;
  int eta = 0;
  std::vector<int> selected; ///< layout indices in layout order
  std::vector<int> extra;    ///< selected indices beyond the kept block
  std::vector<int> dropped;
  std::vector<FaceSelection> faces;
  std::vector<std::string> notes;
};

/// Picks the S-identifying DOFs. ConvexEta on a non-convex element is a
/// ValidationError; every strategy escalates slice by slice until D_S has
/// full row rank and throws InvariantError if even D_N does not.
Selection choose_dofs(const MomentCache &mc, const DofLayout &l, const MatrixXd &D, Strategy strategy,
                      const ReductionOptions &opt = {});

struct SerendipityReduction {
  int N = 0, M = 0, S = 0;
  int dim_s = 0;
  Strategy strategy = Strategy::Systematic;
  int eta = 0;
  std::vector<int> selected, extra, dropped;
  /// dim_s x S: coefficients of Pi^S in the S basis from the selected DOFs.
  MatrixXd P;
  /// N x S: full DOF vector of Pi^S v from the selected DOFs; identity on
  /// the selected rows.
  MatrixXd E;
  VectorXd singular_values; ///< of D_S
  double condition = 0.0;   ///< of the normal equations
  std::vector<std::string> warnings;
};

/// Weighted projector (D_S W D_S^T)^-1 D_S W and the extension matrix.
/// weights defaults to the identity.
SerendipityReduction build_reduction(const DofLayout &l, const MatrixXd &D, const Selection &sel,
                                     const VectorXd &weights = VectorXd(), const ReductionOptions &opt = {});

/// The functional v -> (1/|E|) int_E v . xi'^perp gamma_2(xi'), with xi'
/// centred at the reflex vertex and gamma_2 the product of the two
/// re-entrant edge lines. Needs exactly one reflex vertex.
DofFunctional nonconvex_gamma2(const Element &e, int k);

} // namespace vemser
