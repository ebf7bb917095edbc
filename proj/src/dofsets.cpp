#include "vemser/dofsets.hpp"

#include "vemser/errors.hpp"
#include "vemser/linalg.hpp"

#include <map>
#include <mutex>

namespace vemser {

namespace {

const char *entity_name(Entity e) {
  switch (e) {
  case Entity::Element: return "element";
  case Entity::Face: return "face";
  case Entity::Edge: return "edge";
  }
  return "?";
}

PolyScalar power(const PolyScalar &p, int j) {
  PolyScalar r = PolyScalar::constant(p.dim(), 1.0);
  for (int i = 0; i < j; ++i) r = r * p;
  return r;
}

PolyVector scaled_vector(const PolyScalar &q, const VectorXd &c) { return q * PolyVector::constant(c); }

// Flattened curl matrix from degree n to degree n-1, shared across calls.
const MatrixXd &curl_matrix(int n) {
  static std::mutex mtx;
  static std::map<int, MatrixXd> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, operator_matrix(3, n, 3, n - 1, [](const PolyVector &v) { return curl3(v); })).first;
  return it->second;
}

// r(a) = sum_b q_b m[a + b]: the row of p -> (1/|ent|) int p q at degree n.
VectorXd scalar_row(const MomentCache &mc, Entity kind, int index, const PolyScalar &q, int n) {
  const int d = q.dim();
  const VectorXd m = mc.moments(kind, index, n + q.degree());
  const auto &ma = monomials(d, n);
  const auto &mb = monomials(d, q.degree());
  VectorXd r = VectorXd::Zero(ma.size());
  for (std::size_t b = 0; b < mb.size(); ++b) {
    const double qb = q.coeffs()(b);
    if (qb == 0.0) continue;
    for (std::size_t a = 0; a < ma.size(); ++a) {
      const Exponent s{ma[a][0] + mb[b][0], ma[a][1] + mb[b][1], ma[a][2] + mb[b][2]};
      r(a) += qb * m(monomial_index(s, d));
    }
  }
  return r;
}

VectorXd weight_row(const MomentCache &mc, Entity kind, int index, const PolyVector &g, int n) {
  const int d = g.dim();
  const int np = poly_dim(n, d);
  VectorXd r(d * np);
  for (int c = 0; c < d; ++c) r.segment(c * np, np) = scalar_row(mc, kind, index, g[c], n);
  return r;
}

struct Builder {
  const Element &e;
  DofLayout layout;

  void add(DofFunctional f) { layout.dofs.push_back(std::move(f)); }

  DofFunctional make(DofType t, Entity ent, int idx, const Exponent &test, int deg, PolyVector w) {
    DofFunctional f;
    f.type = t;
    f.entity = ent;
    f.index = idx;
    f.test = test;
    f.test_degree = deg;
    f.weight = std::move(w);
    return f;
  }

  void close_kept() {
    layout.M = layout.N();
    layout.slices = {layout.M};
  }

  void close_slice() {
    for (int i = layout.slices.back(); i < layout.N(); ++i) {
      layout.dofs[i].kept = false;
      layout.dofs[i].slice = layout.num_slices();
    }
    layout.slices.push_back(layout.N());
  }

  // Element moments against grad/brot/x/xperp of scalar monomials of
  // degree lo..hi; one slice per degree when sliced is set.
  template <class Op>
  void scalar_block(DofType t, int lo, int hi, bool sliced, Op op) {
    for (int s = std::max(lo, 0); s <= hi; ++s) {
      for (const auto &ex : monomials(e.dim(), s)) {
        if (exponent_degree(ex) != s) continue;
        add(make(t, Entity::Element, 0, ex, s, op(PolyScalar::monomial(e.dim(), ex))));
      }
      if (sliced) close_slice();
    }
  }

  // xi ^ (e_c xi^alpha) for |alpha| <= hi, dropping dependent fields slice by slice.
  void xwedge_block(DofType t, int hi, bool sliced, bool curl_first) {
    for (int s = 0; s <= hi; ++s) {
      std::vector<DofFunctional> cands;
      for (int c = 0; c < 3; ++c)
        for (const auto &ex : monomials(3, s)) {
          if (exponent_degree(ex) != s) continue;
          DofFunctional f =
              make(t, Entity::Element, 0, ex, s, xwedge_mul(PolyVector::unit(c, PolyScalar::monomial(3, ex))));
          f.component = c;
          f.curl_first = curl_first;
          cands.push_back(std::move(f));
        }
      MatrixXd m(3 * poly_dim(s + 1, 3), cands.size());
      for (std::size_t j = 0; j < cands.size(); ++j) m.col(j) = cands[j].weight.flatten(s + 1);
      for (int j : independent_columns(m)) add(cands[j]);
      if (sliced) close_slice();
    }
  }
};

} // namespace

std::string to_string(Family f) {
  switch (f) {
  case Family::Face2D: return "face2d";
  case Family::Edge2D: return "edge2d";
  case Family::Face3D: return "face3d";
  case Family::Edge3D: return "edge3d";
  }
  return "?";
}

Family family_from_string(const std::string &s) {
  if (s == "face2d") return Family::Face2D;
  if (s == "edge2d") return Family::Edge2D;
  if (s == "face3d") return Family::Face3D;
  if (s == "edge3d") return Family::Edge3D;
  throw ValidationError("unknown family '" + s + "' (expected face2d, edge2d, face3d or edge3d)");
}

std::string to_string(DofType t) {
  switch (t) {
  case DofType::EdgeNormalMoment: return "EdgeNormalMoment";
  case DofType::EdgeTangentMoment: return "EdgeTangentMoment";
  case DofType::GradMoment: return "GradMoment";
  case DofType::XPerpMoment: return "XPerpMoment";
  case DofType::BrotMoment: return "BrotMoment";
  case DofType::XMoment: return "XMoment";
  case DofType::FaceNormalMoment: return "FaceNormalMoment";
  case DofType::XWedgeMoment: return "XWedgeMoment";
  case DofType::CurlXWedgeMoment: return "CurlXWedgeMoment";
  }
  return "?";
}

FamilySpec FamilySpec::face2d(int k, int kd, int kr) {
  FamilySpec s;
  s.family = Family::Face2D;
  s.k = k;
  s.kd = kd;
  s.kr = kr;
  return s;
}

FamilySpec FamilySpec::edge2d(int k, int kd, int kr) {
  FamilySpec s = face2d(k, kd, kr);
  s.family = Family::Edge2D;
  return s;
}

FamilySpec FamilySpec::face3d(int k, int kd, int kr) {
  FamilySpec s = face2d(k, kd, kr);
  s.family = Family::Face3D;
  return s;
}

FamilySpec FamilySpec::edge3d(int beta, int beta_d, int beta_r, int kd, int mu_r) {
  FamilySpec s;
  s.family = Family::Edge3D;
  s.k = beta;
  s.beta = beta;
  s.beta_d = beta_d;
  s.beta_r = beta_r;
  s.kd = kd;
  s.kr = mu_r;
  s.mu_r = mu_r;
  return s;
}

FamilySpec FamilySpec::n2like(int k) { return edge3d(k, k - 1, k - 1, k - 1, k - 2); }
FamilySpec FamilySpec::n1like(int k) { return edge3d(k, k - 1, k, k - 1, k - 1); }

void FamilySpec::validate() const {
  auto fail = [&](const std::string &msg) { throw ValidationError(to_string(family) + " " + str() + ": " + msg); };
  switch (family) {
  case Family::Face2D:
  case Family::Face3D:
    if (k < 0) fail("k must be >= 0");
    if (kd < 0)
      fail("kd = -1 (divergence-free subspace) is not supported: such spaces admit no basis of locally "
           "supported functions");
    if (kr < -1) fail("kr must be >= -1");
    break;
  case Family::Edge2D:
    if (k < 0) fail("k must be >= 0");
    if (kr < 0)
      fail("kr = -1 (rot-free subspace) is not supported: such spaces admit no basis of locally supported "
           "functions");
    if (kd < -1) fail("kd must be >= -1");
    break;
  case Family::Edge3D:
    if (beta < 0) fail("beta must be >= 0");
    if (beta_d < -1) fail("beta_d must be >= -1");
    if (beta_r < 0)
      fail("beta_r = -1 (face rot-free traces) is not supported: such spaces admit no basis of locally "
           "supported functions");
    if (kd < -1) fail("kd must be >= -1");
    if (mu_r < -1) fail("mu_r must be >= -1");
    if (k != beta || kr != mu_r) fail("inconsistent mirrored parameters");
    break;
  }
}

std::string FamilySpec::str() const {
  if (family == Family::Edge3D)
    return "(beta=" + std::to_string(beta) + ", beta_d=" + std::to_string(beta_d) +
           ", beta_r=" + std::to_string(beta_r) + ", kd=" + std::to_string(kd) + ", mu_r=" + std::to_string(mu_r) +
           ")";
  return "(k=" + std::to_string(k) + ", kd=" + std::to_string(kd) + ", kr=" + std::to_string(kr) + ")";
}

nlohmann::json FamilySpec::params_json() const {
  if (family == Family::Edge3D)
    return {{"beta", beta}, {"beta_d", beta_d}, {"beta_r", beta_r}, {"kd", kd}, {"mu_r", mu_r}};
  return {{"k", k}, {"kd", kd}, {"kr", kr}};
}

nlohmann::json DofFunctional::to_json() const {
  nlohmann::json j = {{"type", to_string(type)},
                      {"entity", entity_name(entity)},
                      {"index", index},
                      {"test", {test[0], test[1], test[2]}},
                      {"degree", test_degree},
                      {"kept", kept},
                      {"slice", slice}};
  if (component >= 0) j["component"] = component;
  if (curl_first) j["curl"] = true;
  return j;
}

nlohmann::json DofLayout::to_json() const {
  nlohmann::json j = {{"family", to_string(spec.family)}, {"params", spec.params_json()},
                      {"N", N()},                          {"M", M},
                      {"slices", slices}};
  nlohmann::json list = nlohmann::json::array();
  for (const auto &f : dofs) list.push_back(f.to_json());
  j["dofs"] = list;
  if (!derived.empty()) {
    nlohmann::json dl = nlohmann::json::array();
    for (const auto &f : derived) {
      nlohmann::json fj = f.to_json();
      fj["derived"] = true;
      dl.push_back(fj);
    }
    j["derived"] = dl;
  }
  return j;
}

PolyScalar edge_variable(const Element &e, int edge) {
  VectorXd mid, t;
  double len;
  if (e.dim() == 2) {
    const auto &ed = e.polygon().edges().at(edge);
    mid = ed.mid;
    t = ed.tangent;
    len = ed.length;
  } else {
    const auto &ed = e.polyhedron().edges().at(edge);
    mid = ed.mid;
    t = ed.tangent;
    len = ed.length;
  }
  return PolyScalar::affine(2.0 * e.h() / len * t, 2.0 * (e.origin() - mid).dot(t) / len);
}

std::vector<PolyScalar> face_variables(const Element &e, int face) {
  const auto &f = e.polyhedron().faces().at(face);
  const VectorXd off = e.origin() - VectorXd(f.centroid);
  const double s = e.h() / f.diameter;
  return {PolyScalar::affine(s * VectorXd(f.frame.a1), off.dot(f.frame.a1) / f.diameter),
          PolyScalar::affine(s * VectorXd(f.frame.a2), off.dot(f.frame.a2) / f.diameter)};
}

DofLayout build_layout(const FamilySpec &spec, const Element &e) {
  spec.validate();
  if (spec.dim() != e.dim())
    throw ValidationError("family " + to_string(spec.family) + " needs a " + std::to_string(spec.dim()) +
                          "D element, got " + std::to_string(e.dim()) + "D");
  Builder b{e, {}};
  b.layout.spec = spec;
  const int d = e.dim();

  auto edge_block = [&](DofType t, int deg) {
    const int ne = d == 2 ? e.polygon().size() : static_cast<int>(e.polyhedron().edges().size());
    for (int i = 0; i < ne; ++i) {
      const PolyScalar s = edge_variable(e, i);
      VectorXd dir;
      if (d == 2)
        dir = t == DofType::EdgeNormalMoment ? e.polygon().edges()[i].normal : e.polygon().edges()[i].tangent;
      else
        dir = e.polyhedron().edges()[i].tangent;
      for (int j = 0; j <= deg; ++j)
        b.add(b.make(t, Entity::Edge, i, {j, 0, 0}, j, scaled_vector(power(s, j), dir)));
    }
  };

  // Face moments against tangential or normal fields built from q(u, v).
  auto face_block = [&](int f, int lo, int hi, DofType t) {
    const auto &face = e.polyhedron().faces()[f];
    const auto uv = face_variables(e, f);
    const VectorXd a1 = face.frame.a1, a2 = face.frame.a2, n = face.frame.n;
    for (const auto &ex : monomials(2, std::max(hi, 0))) {
      const int s = exponent_degree(ex);
      if (hi < 0 || s < lo || s > hi) continue;
      const PolyScalar q2 = PolyScalar::monomial(2, ex);
      const PolyScalar q = compose(q2, uv);
      PolyVector w;
      if (t == DofType::FaceNormalMoment) {
        w = scaled_vector(q, n);
      } else if (t == DofType::XMoment) {
        w = scaled_vector(q * uv[0], a1) + scaled_vector(q * uv[1], a2);
      } else { // face brot: (dq/dv) a1 - (dq/du) a2
        const PolyScalar du = compose(q2.derivative(0), uv), dv = compose(q2.derivative(1), uv);
        w = scaled_vector(dv, a1) - scaled_vector(du, a2);
      }
      b.add(b.make(t, Entity::Face, f, ex, s, w));
    }
  };

  switch (spec.family) {
  case Family::Face2D:
    edge_block(DofType::EdgeNormalMoment, spec.k);
    b.scalar_block(DofType::GradMoment, 1, spec.kd, false, [](const PolyScalar &q) { return grad(q); });
    b.close_kept();
    b.scalar_block(DofType::XPerpMoment, 0, spec.kr, true, [](const PolyScalar &q) { return xperp_mul(q); });
    break;
  case Family::Edge2D:
    edge_block(DofType::EdgeTangentMoment, spec.k);
    b.scalar_block(DofType::BrotMoment, 1, spec.kr, false, [](const PolyScalar &q) { return brot2(q); });
    b.close_kept();
    b.scalar_block(DofType::XMoment, 0, spec.kd, true, [](const PolyScalar &q) { return x_mul(q); });
    break;
  case Family::Face3D:
    for (int f = 0; f < e.num_facets(); ++f) face_block(f, 0, spec.k, DofType::FaceNormalMoment);
    b.scalar_block(DofType::GradMoment, 1, spec.kd, false, [](const PolyScalar &q) { return grad(q); });
    b.close_kept();
    b.xwedge_block(DofType::XWedgeMoment, spec.kr, true, false);
    break;
  case Family::Edge3D:
    edge_block(DofType::EdgeTangentMoment, spec.beta);
    for (int f = 0; f < e.num_facets(); ++f) {
      face_block(f, 1, spec.beta_r, DofType::BrotMoment);
      face_block(f, 0, spec.beta_d, DofType::XMoment);
    }
    b.xwedge_block(DofType::CurlXWedgeMoment, spec.mu_r, false, true);
    b.close_kept();
    b.scalar_block(DofType::XMoment, 0, spec.kd, true, [](const PolyScalar &q) { return x_mul(q); });
    {
      // Face fluxes of curl v follow from the tangential face data.
      const std::size_t before = b.layout.dofs.size();
      for (int f = 0; f < e.num_facets(); ++f) face_block(f, 0, spec.beta_r, DofType::FaceNormalMoment);
      for (std::size_t i = before; i < b.layout.dofs.size(); ++i) {
        b.layout.dofs[i].curl_first = true;
        b.layout.derived.push_back(b.layout.dofs[i]);
      }
      b.layout.dofs.resize(before);
    }
    break;
  }
  return std::move(b.layout);
}

VectorXd functional_row(const MomentCache &mc, const DofFunctional &f, int n) {
  const int d = f.weight.dim();
  if (!f.curl_first) return weight_row(mc, f.entity, f.index, f.weight, n);
  if (n == 0) return VectorXd::Zero(d);
  return curl_matrix(n).transpose() * weight_row(mc, f.entity, f.index, f.weight, n - 1);
}

MatrixXd functional_matrix(const MomentCache &mc, const DofLayout &l, int n) {
  const int d = l.spec.dim();
  MatrixXd m(l.N(), d * poly_dim(n, d));
  for (int i = 0; i < l.N(); ++i) m.row(i) = functional_row(mc, l.dofs[i], n).transpose();
  return m;
}

double dof_apply(const MomentCache &mc, const DofFunctional &f, const PolyVector &v) {
  if (v.dim() != mc.element().dim())
    throw ValidationError("dof_apply: field has " + std::to_string(v.dim()) + " components, element is " +
                          std::to_string(mc.element().dim()) + "D");
  const int n = v.degree();
  return functional_row(mc, f, n).dot(v.flatten(n));
}

VectorXd dof_vector(const MomentCache &mc, const DofLayout &l, const PolyVector &v) {
  const int n = v.degree();
  return functional_matrix(mc, l, n) * v.flatten(n);
}

MatrixXd dof_matrix(const MomentCache &mc, const DofLayout &l, const SpaceBasis &s, bool check, double rank_tol) {
  if (s.d != l.spec.dim()) throw ValidationError("dof_matrix: space dimension does not match the element");
  if (s.size() == 0) return MatrixXd(0, l.N());
  const int n = s.degree();
  const MatrixXd D = (functional_matrix(mc, l, n) * s.matrix(n)).transpose();
  if (check) {
    const int r = numerical_rank(equilibrate_columns(D), rank_tol);
    if (r < s.size()) {
      const VectorXd sv = singular_values(D);
      throw InvariantError("dof_matrix: D has rank " + std::to_string(r) + " < dim S = " + std::to_string(s.size()) +
                           " (min singular value " + std::to_string(sv(sv.size() - 1)) +
                           "); the space is not contained in the VEM space");
    }
  }
  return D;
}

SpaceName default_s_space(const FamilySpec &spec) {
  switch (spec.family) {
  case Family::Face2D:
  case Family::Face3D:
    if (spec.kd == spec.k - 1 && spec.k >= 1) return SpaceName::BDMk;
    if (spec.kd == spec.k) return SpaceName::RTk;
    return SpaceName::PkVec;
  case Family::Edge2D:
    if (spec.kr == spec.k - 1) return SpaceName::N2k;
    if (spec.kr == spec.k) return SpaceName::N1k;
    return SpaceName::PkVec;
  case Family::Edge3D: return spec.beta_r == spec.beta ? SpaceName::N1k : SpaceName::N2k;
  }
  return SpaceName::PkVec;
}

SpaceBasis default_s_basis(const FamilySpec &spec) {
  return build_basis(default_s_space(spec), spec.degree(), spec.dim());
}

SpaceBasis default_s_basis(const FamilySpec &spec, const MomentCache &mc) {
  return orthonormal_basis(default_s_basis(spec), mc);
}

MatrixXd vector_mass_matrix(const MomentCache &mc, int n) {
  const int d = mc.element().dim();
  const int np = poly_dim(n, d);
  const VectorXd m = mc.moments(Entity::Element, 0, 2 * n);
  const auto &ms = monomials(d, n);
  MatrixXd g(np, np);
  for (int a = 0; a < np; ++a)
    for (int b = 0; b <= a; ++b) {
      const Exponent s{ms[a][0] + ms[b][0], ms[a][1] + ms[b][1], ms[a][2] + ms[b][2]};
      g(a, b) = g(b, a) = m(monomial_index(s, d));
    }
  MatrixXd out = MatrixXd::Zero(d * np, d * np);
  for (int c = 0; c < d; ++c) out.block(c * np, c * np, np, np) = g;
  return out;
}

SpaceBasis orthonormal_basis(const SpaceBasis &s, const MomentCache &mc) {
  if (s.size() == 0) return s;
  const int n = s.degree();
  MatrixXd B = s.matrix(n);
  // two passes of Cholesky-based Gram-Schmidt for accuracy
  for (int pass = 0; pass < 2; ++pass) {
    const MatrixXd G = B.transpose() * vector_mass_matrix(mc, n) * B;
    Eigen::LLT<MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) throw InvariantError("orthonormal_basis: members are linearly dependent");
    const MatrixXd L = llt.matrixL();
    B = L.triangularView<Eigen::Lower>().solve(B.transpose()).transpose();
  }
  SpaceBasis out = s;
  for (int j = 0; j < s.size(); ++j) out.members[j] = PolyVector::from_flat(s.d, n, B.col(j));
  return out;
}

MatrixXd equilibrate_columns(const MatrixXd &m) {
  MatrixXd out = m;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double nv = out.col(j).norm();
    if (nv > 0) out.col(j) /= nv;
  }
  return out;
}

nlohmann::json EquivalentDofNote::to_json() const {
  return {{"block", block},
          {"alternative", alternative},
          {"rows", rows},
          {"rank_original", rank_original},
          {"rank_alternative", rank_alternative},
          {"rank_joint", rank_joint},
          {"same_span", same_span}};
}

std::vector<EquivalentDofNote> equivalent_dof_note(const MomentCache &mc, const DofLayout &l) {
  const Element &e = mc.element();
  const int d = e.dim();
  const int n = l.spec.degree() + 2;
  const int np = d * poly_dim(n, d);

  std::vector<VectorXd> bnd, orig, alt;
  std::string block, alternative;
  for (const auto &f : l.dofs) {
    const bool boundary = f.entity == Entity::Edge || (f.entity == Entity::Face && f.type == DofType::FaceNormalMoment);
    if (boundary) bnd.push_back(functional_row(mc, f, n));
  }

  // Zero-mean version of a scalar test polynomial on one entity.
  auto zero_mean = [&](const PolyScalar &q, Entity kind, int idx) {
    const VectorXd m = mc.moments(kind, idx, q.degree());
    return q - PolyScalar::constant(d, q.coeffs().dot(m));
  };

  switch (l.spec.family) {
  case Family::Face2D:
  case Family::Face3D:
  case Family::Edge2D: {
    const bool is_div = l.spec.family != Family::Edge2D;
    block = is_div ? "GradMoment" : "BrotMoment";
    alternative = is_div ? "(1/|E|) int_E div v q, q in P_kd zero mean" : "(1/|E|) int_E rot v q, q in P_kr zero mean";
    const MatrixXd op = is_div ? operator_matrix(d, n, 1, n - 1, [](const PolyVector &v) { return PolyVector({div(v)}); })
                               : operator_matrix(d, n, 1, n - 1, [](const PolyVector &v) { return PolyVector({rot2(v)}); });
    const DofType t = is_div ? DofType::GradMoment : DofType::BrotMoment;
    for (const auto &f : l.dofs) {
      if (f.type != t) continue;
      orig.push_back(functional_row(mc, f, n));
      const PolyScalar q0 = zero_mean(PolyScalar::monomial(d, f.test), Entity::Element, 0);
      alt.push_back(op.transpose() * scalar_row(mc, Entity::Element, 0, q0, n - 1));
    }
    break;
  }
  case Family::Edge3D: {
    block = "face BrotMoment";
    alternative = "(1/|f|) int_f (curl v . n_f) q, q in P_beta_r(f) zero mean";
    for (const auto &f : l.dofs) {
      if (f.type != DofType::BrotMoment || f.entity != Entity::Face) continue;
      orig.push_back(functional_row(mc, f, n));
      const auto uv = face_variables(e, f.index);
      const PolyScalar q0 = zero_mean(compose(PolyScalar::monomial(2, f.test), uv), Entity::Face, f.index);
      DofFunctional g = f;
      g.curl_first = true;
      g.weight = scaled_vector(q0, VectorXd(e.polyhedron().faces()[f.index].frame.n));
      alt.push_back(functional_row(mc, g, n));
    }
    break;
  }
  }

  auto stack = [&](std::initializer_list<const std::vector<VectorXd> *> parts) {
    int rows = 0;
    for (auto p : parts) rows += static_cast<int>(p->size());
    MatrixXd m(rows, np);
    int r = 0;
    for (auto p : parts)
      for (const auto &v : *p) {
        const double nv = v.norm();
        m.row(r++) = (nv > 0 ? v / nv : v).transpose();
      }
    return m;
  };
  EquivalentDofNote note;
  note.block = block;
  note.alternative = alternative;
  note.rows = static_cast<int>(orig.size());
  const double tol = 1e-10;
  note.rank_original = numerical_rank(stack({&bnd, &orig}), tol);
  note.rank_alternative = numerical_rank(stack({&bnd, &alt}), tol);
  note.rank_joint = numerical_rank(stack({&bnd, &orig, &alt}), tol);
  note.same_span = note.rank_original == note.rank_joint && note.rank_alternative == note.rank_joint;
  return {note};
}

} // namespace vemser
