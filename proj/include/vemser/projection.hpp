#pragma once

#include "vemser/dofsets.hpp"
#include "vemser/serendipity.hpp"

#include <functional>
#include <optional>

namespace vemser {

/// Largest s for which the moments of v against (P_s)^d follow from the DOFs:
/// Face2D and Face3D kr+1, Edge2D kd+1, Edge3D min(mu_r, beta_d, kd+1).
int s_max(const FamilySpec &spec);

/// Whether (P_s)^d lies in the local space, so that the projector must give
/// it back: traces of degree <= k, div (face families) or rot (edge families)
/// of degree <= kd (kr), and face rot of degree <= beta_r for Edge3D.
bool polynomials_in_space(const FamilySpec &spec, int s);

/// Rows map a full DOF vector to (1/|E|) int_E v . e_c xi^alpha, ordered like
/// PolyVector::flatten(s).
struct MomentMap {
  int s = 0;
  int s_max = 0;
  MatrixXd map;
};

/// Throws ValidationError when s > s_max(spec).
MomentMap moment_map(const MomentCache &mc, const DofLayout &l, int s);

/// DOF vector -> coefficients of the L2(E) projection onto (P_s)^d,
/// flattened at degree s.
MatrixXd l2_projector(const MomentCache &mc, const DofLayout &l, int s);

/// Exact DOFs of a polynomial field.
VectorXd interpolate(const MomentCache &mc, const DofLayout &l, const PolyVector &u);

/// Field given pointwise in physical coordinates.
using VectorField = std::function<VectorXd(const VectorXd &)>;

/// DOFs of a callable, integrated with rules exact for order plus the test
/// polynomial degree (default order: family degree + 4). Curl moments are
/// integrated by parts, so only u itself is evaluated.
VectorXd interpolate(const MomentCache &mc, const DofLayout &l, const VectorField &u, int order = -1);

/// Full DOF vector of the reduced interpolant: the selected DOFs of u,
/// extended by E.
VectorXd reduced_interpolant(const SerendipityReduction &r, const VectorXd &full_dofs);

/// Row over DOFs giving int_E div v q (Face2D, Face3D) or int_E rot v q
/// (Edge2D) for a scalar polynomial q of degree <= kd (resp. kr).
VectorXd div_moment_row(const MomentCache &mc, const DofLayout &l, const PolyScalar &q);

/// Residuals int_E div(u - Pi u) q (rot for Edge2D) for q over the monomials
/// of P_kd (P_kr), relative to max(1, |int_E div u q|). With a reduction the
/// interpolant is the serendipity one.
VectorXd check_b_compat(const MomentCache &mc, const DofLayout &l, const PolyVector &u,
                        const SerendipityReduction *red = nullptr);
/// Same for several inputs at once, one column per input.
MatrixXd check_b_compat(const MomentCache &mc, const DofLayout &l, const std::vector<PolyVector> &us,
                        const SerendipityReduction *red = nullptr);

/// Edge3D: residuals of the curl moments of Pi u against those of u: face
/// fluxes (1/|f|) int_f curl v . n_f q for q in P_beta_r(f), rebuilt from
/// edge and face DOFs, and the CurlXWedge moments.
VectorXd check_curl_preserving(const MomentCache &mc, const DofLayout &l, const PolyVector &u,
                               const SerendipityReduction *red = nullptr);
MatrixXd check_curl_preserving(const MomentCache &mc, const DofLayout &l, const std::vector<PolyVector> &us,
                               const SerendipityReduction *red = nullptr);

/// Rows over DOFs for the derived Edge3D functionals, in the order of
/// layout.derived.
MatrixXd derived_rows(const MomentCache &mc, const DofLayout &l);

} // namespace vemser
