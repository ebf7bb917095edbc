#pragma once

#include "vemser/geometry.hpp"
#include "vemser/polynomial.hpp"
#include "vemser/quadrature.hpp"
#include "vemser/spaces.hpp"

#include "json.hpp"

#include <functional>
#include <string>
#include <vector>

namespace vemser {

enum class Family { Face2D, Edge2D, Face3D, Edge3D };

std::string to_string(Family f);
Family family_from_string(const std::string &s);
inline int family_dim(Family f) { return (f == Family::Face2D || f == Family::Edge2D) ? 2 : 3; }

/// Parameters of one VEM family. Face2D, Edge2D and Face3D use (k, kd, kr);
/// Edge3D uses (beta, beta_d, beta_r, kd, mu_r) with k mirroring beta.
struct FamilySpec {
  Family family = Family::Face2D;
  int k = 1, kd = 0, kr = 0;
  int beta = 1, beta_d = 0, beta_r = 0, mu_r = -1;

  static FamilySpec face2d(int k, int kd, int kr);
  static FamilySpec edge2d(int k, int kd, int kr);
  static FamilySpec face3d(int k, int kd, int kr);
  static FamilySpec edge3d(int beta, int beta_d, int beta_r, int kd, int mu_r);
  /// beta = (k, k-1, k-1), mu_r = k-2, kd = k-1
  static FamilySpec n2like(int k);
  /// beta = (k, k-1, k), mu_r = k-1, kd = k-1
  static FamilySpec n1like(int k);

  int dim() const { return family_dim(family); }
  /// Polynomial degree of the boundary traces (k, or beta for Edge3D).
  int degree() const { return family == Family::Edge3D ? beta : k; }
  /// Throws ValidationError on parameter combinations without a local basis.
  void validate() const;
  std::string str() const;
  nlohmann::json params_json() const;
};

enum class DofType {
  EdgeNormalMoment,  // (1/|e|) int_e v.n_e q
  EdgeTangentMoment, // (1/|e|) int_e v.t_e q
  GradMoment,        // (1/|E|) int_E v.grad q, q non-constant
  XPerpMoment,       // (1/|E|) int_E v.xi^perp q
  BrotMoment,        // element (2D) or face (3D) brot moment
  XMoment,           // element xi q, or face x^tau q
  FaceNormalMoment,  // (1/|f|) int_f v.n_f q
  XWedgeMoment,      // (1/|E|) int_E v.(xi ^ q)
  CurlXWedgeMoment,  // (1/|E|) int_E curl v.(xi ^ q)
};

std::string to_string(DofType t);

/// One functional F(v) = (1/|ent|) int_ent op(v) . weight, with op the
/// identity or the scaled curl. The weight is stored in the element's scaled
/// coordinates; the test polynomial it came from is recorded for reports.
struct DofFunctional {
  DofType type = DofType::EdgeNormalMoment;
  Entity entity = Entity::Element;
  int index = 0;      ///< edge or face index; 0 for the element
  Exponent test{};    ///< test monomial exponent in the entity's own variables
  int component = -1; ///< vector component of the test monomial, -1 if scalar
  int test_degree = 0;
  bool curl_first = false;
  PolyVector weight;
  bool kept = true;
  int slice = -1; ///< slice id within the tail, -1 for kept DOFs

  nlohmann::json to_json() const;
};

struct DofLayout {
  FamilySpec spec;
  std::vector<DofFunctional> dofs;
  int M = 0;
  /// Tail slice boundaries: slices[0] == M, slices.back() == N.
  std::vector<int> slices;
  /// Functionals implied by the stored ones (Edge3D face fluxes of curl v).
  std::vector<DofFunctional> derived;

  int N() const { return static_cast<int>(dofs.size()); }
  int num_slices() const { return static_cast<int>(slices.size()) - 1; }
  nlohmann::json to_json() const;
};

DofLayout build_layout(const FamilySpec &spec, const Element &e);

/// Row vector r with F(v) = r . v.flatten(n) for any v of degree <= n.
VectorXd functional_row(const MomentCache &mc, const DofFunctional &f, int n);

/// All functionals as rows at degree n (N x d*pi_n).
MatrixXd functional_matrix(const MomentCache &mc, const DofLayout &l, int n);

double dof_apply(const MomentCache &mc, const DofFunctional &f, const PolyVector &v);
VectorXd dof_vector(const MomentCache &mc, const DofLayout &l, const PolyVector &v);

/// D_ij = F_j(s_i), dim S x N. Throws InvariantError when D is not of full
/// row rank and check is set.
MatrixXd dof_matrix(const MomentCache &mc, const DofLayout &l, const SpaceBasis &s, bool check = true,
                    double rank_tol = 1e-8);

/// The default preserved space for a layout: BDM-type or RT for face
/// families, N2 or N1 for edge families, (P_k)^d otherwise.
SpaceName default_s_space(const FamilySpec &spec);
SpaceBasis default_s_basis(const FamilySpec &spec);
/// Same space, orthonormal in (1/|E|) L2(E); see orthonormal_basis.
SpaceBasis default_s_basis(const FamilySpec &spec, const MomentCache &mc);

/// (1/|E|) L2(E) Gram matrix of the flattened vector monomials of degree <= n.
MatrixXd vector_mass_matrix(const MomentCache &mc, int n);

/// Members replaced by (1/|E|) L2(E)-orthonormal combinations, built in order
/// so every slice prefix spans the same space as before. Raw scaled
/// monomials make D ill-conditioned on small or flat elements.
SpaceBasis orthonormal_basis(const SpaceBasis &s, const MomentCache &mc);

/// Copy of m with every nonzero column scaled to unit norm; rank decisions
/// on D use this so the DOF normalization does not bias them.
MatrixXd equilibrate_columns(const MatrixXd &m);

/// Comparison of one divergence or rot block with its alternative moment
/// form, both taken together with the boundary rows.
struct EquivalentDofNote {
  std::string block;
  std::string alternative;
  int rows = 0;
  int rank_original = 0;
  int rank_alternative = 0;
  int rank_joint = 0;
  bool same_span = false;

  nlohmann::json to_json() const;
};

std::vector<EquivalentDofNote> equivalent_dof_note(const MomentCache &mc, const DofLayout &l);

// Entity coordinates used by the test polynomials, as affine polynomials in
// the element's scaled variables.

/// s = 2 (x - m_e) . t_e / |e|, in [-1, 1] along the edge.
PolyScalar edge_variable(const Element &e, int edge);
/// (u, v) = ((x - c_f) . a1, (x - c_f) . a2) / h_f.
std::vector<PolyScalar> face_variables(const Element &e, int face);

} // namespace vemser
