#include "vemser/projection.hpp"

#include "vemser/errors.hpp"
#include "vemser/linalg.hpp"

#include <map>
#include <tuple>

namespace vemser {

namespace {

// (1/|ent|) int_ent p, p in the element's scaled variables.
double mean(const MomentCache &mc, Entity kind, int idx, const PolyScalar &p) {
  return p.coeffs().dot(mc.moments(kind, idx, p.degree()));
}

// Solves a square (or overdetermined, consistent) system and insists on a
// small residual.
MatrixXd solve_exact(const MatrixXd &a, const MatrixXd &b, const char *what) {
  const auto qr = a.colPivHouseholderQr();
  if (qr.rank() < a.cols())
    throw InvariantError(std::string(what) + ": decomposition basis is singular");
  MatrixXd x = qr.solve(b);
  const double res = (a * x - b).norm();
  if (res > 1e-8 * std::max(1.0, b.norm()))
    throw InvariantError(std::string(what) + ": decomposition residual " + std::to_string(res));
  return x;
}

// Everything needed to write a functional of v as a row over the DOFs.
class Rows {
public:
  Rows(const MomentCache &mc, const DofLayout &l)
      : mc_(mc), l_(l), e_(mc.element()), d_(e_.dim()), h_(e_.h()), vol_(e_.measure()), n_(l.N()) {
    for (int i = 0; i < n_; ++i) {
      const auto &f = l.dofs[i];
      index_[key(f.type, f.entity, f.index, f.test, f.component)] = i;
    }
  }

  int N() const { return n_; }
  double vol() const { return vol_; }
  double h() const { return h_; }
  const DofLayout &layout() const { return l_; }
  const Element &element() const { return e_; }

  int find(DofType t, Entity ent, int idx, const Exponent &ex, int comp = -1) const {
    auto it = index_.find(key(t, ent, idx, ex, comp));
    if (it == index_.end())
      throw InvariantError("moment map needs a " + to_string(t) + " DOF that the layout does not have");
    return it->second;
  }

  std::vector<int> entity_dofs(DofType t, Entity ent, int idx) const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
      if (l_.dofs[i].type == t && l_.dofs[i].entity == ent && l_.dofs[i].index == idx) out.push_back(i);
    return out;
  }

  // Row r with r . dofs(v) = b_i on each test field; the functional is known
  // to depend only on a polynomial trace that the tests span.
  VectorXd fit(const std::vector<int> &J, const std::vector<PolyVector> &tests, const VectorXd &b) const {
    MatrixXd a(tests.size(), J.size());
    for (std::size_t i = 0; i < tests.size(); ++i)
      for (std::size_t j = 0; j < J.size(); ++j) a(i, j) = dof_apply(mc_, l_.dofs[J[j]], tests[i]);
    const VectorXd c = solve_exact(a, b, "trace fit");
    VectorXd r = VectorXd::Zero(n_);
    for (std::size_t j = 0; j < J.size(); ++j) r(J[j]) = c(j);
    return r;
  }

  // int_e (v . dir_e) g with dir the tangent (or the normal in 2D).
  VectorXd edge_row(int edge, DofType t, const PolyScalar &g) const {
    const PolyScalar s = edge_variable(e_, edge);
    VectorXd dir;
    double len;
    if (d_ == 2) {
      const auto &ed = e_.polygon().edges()[edge];
      dir = t == DofType::EdgeNormalMoment ? ed.normal : ed.tangent;
      len = ed.length;
    } else {
      dir = e_.polyhedron().edges()[edge].tangent;
      len = e_.polyhedron().edges()[edge].length;
    }
    const int deg = l_.spec.degree();
    std::vector<PolyVector> tests;
    VectorXd b(deg + 1);
    PolyScalar p = PolyScalar::constant(d_, 1.0);
    for (int j = 0; j <= deg; ++j) {
      tests.push_back(p * PolyVector::constant(dir));
      b(j) = len * mean(mc_, Entity::Edge, edge, p * g);
      p = p * s;
    }
    return fit(entity_dofs(t, Entity::Edge, edge), tests, b);
  }

  // sum over facets of int v . n g (normal edge or face DOFs).
  VectorXd flux_row(const PolyScalar &g) const {
    VectorXd r = VectorXd::Zero(n_);
    if (d_ == 2) {
      for (int i = 0; i < e_.polygon().size(); ++i) r += edge_row(i, DofType::EdgeNormalMoment, g);
      return r;
    }
    for (int f = 0; f < e_.num_facets(); ++f) {
      const auto uv = face_variables(e_, f);
      const VectorXd n = e_.polyhedron().faces()[f].frame.n;
      const double area = mc_.measure(Entity::Face, f);
      std::vector<PolyVector> tests;
      std::vector<double> b;
      for (const auto &ex : monomials(2, l_.spec.k)) {
        const PolyScalar q = compose(PolyScalar::monomial(2, ex), uv);
        tests.push_back(q * PolyVector::constant(n));
        b.push_back(area * mean(mc_, Entity::Face, f, q * g));
      }
      r += fit(entity_dofs(DofType::FaceNormalMoment, Entity::Face, f), tests,
               Eigen::Map<VectorXd>(b.data(), b.size()));
    }
    return r;
  }

  // sum over polygon edges of int_e v . t g (counterclockwise tangent).
  VectorXd tangent_boundary_row(const PolyScalar &g) const {
    VectorXd r = VectorXd::Zero(n_);
    for (int i = 0; i < e_.polygon().size(); ++i) r += edge_row(i, DofType::EdgeTangentMoment, g);
    return r;
  }

  // Boundary of face f, counterclockwise about its outward normal.
  VectorXd face_boundary_row(int f, const PolyScalar &g) const {
    VectorXd r = VectorXd::Zero(n_);
    for (const auto &[edge, orient] : e_.polyhedron().faces()[f].edges)
      r += orient * edge_row(edge, DofType::EdgeTangentMoment, g);
    return r;
  }

  // L2(E) projection of g onto P_deg, as a polynomial of degree deg.
  PolyScalar element_projection(const PolyScalar &g, int deg) const {
    const auto &mons = monomials(d_, deg);
    const int m = static_cast<int>(mons.size());
    const VectorXd mom = mc_.moments(Entity::Element, 0, 2 * deg);
    MatrixXd gram(m, m);
    VectorXd rhs(m);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        const Exponent s{mons[a][0] + mons[b][0], mons[a][1] + mons[b][1], mons[a][2] + mons[b][2]};
        gram(a, b) = mom(monomial_index(s, d_));
      }
      rhs(a) = mean(mc_, Entity::Element, 0, PolyScalar::monomial(d_, mons[a]) * g);
    }
    return PolyScalar(d_, deg, gram.ldlt().solve(rhs));
  }

  // L2(f) projection of g onto P_deg(f); returns the (u, v) coefficients.
  VectorXd face_projection(int f, const PolyScalar &g, int deg) const {
    const auto uv = face_variables(e_, f);
    const auto &mons = monomials(2, deg);
    const int m = static_cast<int>(mons.size());
    std::vector<PolyScalar> basis;
    for (const auto &ex : mons) basis.push_back(compose(PolyScalar::monomial(2, ex), uv));
    MatrixXd gram(m, m);
    VectorXd rhs(m);
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) gram(a, b) = gram(b, a) = mean(mc_, Entity::Face, f, basis[a] * basis[b]);
      rhs(a) = mean(mc_, Entity::Face, f, basis[a] * g);
    }
    return gram.ldlt().solve(rhs);
  }

  // int_E v . grad_xi phi, Face2D and Face3D. div v lies in P_kd, so only the
  // projection psi of phi meets the interior; the rest is a boundary flux.
  VectorXd grad_row(const PolyScalar &phi) const {
    const PolyScalar psi = element_projection(phi, l_.spec.kd);
    VectorXd r = h_ * flux_row(phi - psi);
    const auto &mons = monomials(d_, l_.spec.kd);
    for (std::size_t b = 1; b < mons.size(); ++b)
      if (psi.coeffs()(b) != 0.0)
        r(find(DofType::GradMoment, Entity::Element, 0, mons[b])) += vol_ * psi.coeffs()(b);
    return r;
  }

  // int_E v . brot_xi phi, Edge2D, with rot v in P_kr.
  VectorXd brot_row(const PolyScalar &phi) const {
    const PolyScalar psi = element_projection(phi, l_.spec.kr);
    VectorXd r = -h_ * tangent_boundary_row(phi - psi);
    const auto &mons = monomials(d_, l_.spec.kr);
    for (std::size_t b = 1; b < mons.size(); ++b)
      if (psi.coeffs()(b) != 0.0)
        r(find(DofType::BrotMoment, Entity::Element, 0, mons[b])) += vol_ * psi.coeffs()(b);
    return r;
  }

  // int_f rot_f v^tau g for the tangential trace on face f; rot_f v^tau lies
  // in P_beta_r(f).
  VectorXd face_rot_row(int f, const PolyScalar &g) const {
    const auto uv = face_variables(e_, f);
    const auto &face = e_.polyhedron().faces()[f];
    const VectorXd c = face_projection(f, g, l_.spec.beta_r);
    const PolyScalar psi = compose(PolyScalar(2, l_.spec.beta_r, c), uv);
    VectorXd r = face_boundary_row(f, psi);
    const auto &mons = monomials(2, l_.spec.beta_r);
    const double scale = mc_.measure(Entity::Face, f) / face.diameter;
    for (std::size_t b = 1; b < mons.size(); ++b)
      if (c(b) != 0.0) r(find(DofType::BrotMoment, Entity::Face, f, mons[b])) += scale * c(b);
    return r;
  }

  // int_f v^tau . brot_uv phi, phi in (u, v): Stokes twice, as in brot_row.
  VectorXd face_brot_row(int f, const PolyScalar &phi_uv) const {
    const auto uv = face_variables(e_, f);
    const auto &face = e_.polyhedron().faces()[f];
    const PolyScalar phi = compose(phi_uv, uv);
    const VectorXd c = face_projection(f, phi, l_.spec.beta_r);
    const PolyScalar psi = compose(PolyScalar(2, l_.spec.beta_r, c), uv);
    VectorXd r = face.diameter * face_boundary_row(f, psi - phi);
    const auto &mons = monomials(2, l_.spec.beta_r);
    const double area = mc_.measure(Entity::Face, f);
    for (std::size_t b = 1; b < mons.size(); ++b)
      if (c(b) != 0.0) r(find(DofType::BrotMoment, Entity::Face, f, mons[b])) += area * c(b);
    return r;
  }

  // int_f v^tau . w for a tangential polynomial field w on face f of degree m.
  VectorXd face_tangential_row(int f, const PolyVector &w, int m) const {
    const auto &face = e_.polyhedron().faces()[f];
    const VectorXd o = (VectorXd(face.centroid) - e_.origin()) / h_;
    const double s = face.diameter / h_;
    std::vector<PolyScalar> xi;
    for (int i = 0; i < 3; ++i) {
      VectorXd g(2);
      g << s * face.frame.a1(i), s * face.frame.a2(i);
      xi.push_back(PolyScalar::affine(g, o(i)));
    }
    PolyVector w2({compose(dot(w, VectorXd(face.frame.a1)), xi).padded(m),
                   compose(dot(w, VectorXd(face.frame.a2)), xi).padded(m)});
    // w2 = brot_uv phi + (u, v) q with phi in P_{m+1}, q in P_{m-1}.
    std::vector<VectorXd> cols;
    std::vector<std::pair<bool, Exponent>> tags;
    for (const auto &ex : monomials(2, m + 1)) {
      if (exponent_degree(ex) == 0) continue;
      cols.push_back(brot2(PolyScalar::monomial(2, ex)).flatten(m));
      tags.push_back({true, ex});
    }
    for (const auto &ex : monomials(2, m - 1)) {
      cols.push_back(x_mul(PolyScalar::monomial(2, ex)).flatten(m));
      tags.push_back({false, ex});
    }
    MatrixXd a(2 * poly_dim(m, 2), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) a.col(j) = cols[j];
    const VectorXd x = solve_exact(a, w2.flatten(m), "face decomposition");
    VectorXd r = VectorXd::Zero(n_);
    PolyScalar phi(2, m + 1);
    const double area = mc_.measure(Entity::Face, f);
    for (std::size_t j = 0; j < tags.size(); ++j) {
      if (x(j) == 0.0) continue;
      if (tags[j].first)
        phi.coeffs()(monomial_index(tags[j].second, 2)) += x(j);
      else
        r(find(DofType::XMoment, Entity::Face, f, tags[j].second)) += area * x(j);
    }
    return r + face_brot_row(f, phi);
  }

  // int_E curl_x v . Q for Q in (P_m)^3, Edge3D: Q = grad phi + xi ^ q.
  VectorXd curl_dot_row(const PolyVector &qf, int m) const {
    std::vector<VectorXd> cols;
    std::vector<int> ids; // -1 - monomial index for gradients, DOF index otherwise
    for (const auto &ex : monomials(3, m + 1)) {
      if (exponent_degree(ex) == 0) continue;
      cols.push_back(grad(PolyScalar::monomial(3, ex)).flatten(m));
      ids.push_back(-1 - monomial_index(ex, 3));
    }
    for (int i = 0; i < n_; ++i) {
      const auto &f = l_.dofs[i];
      if (f.type != DofType::CurlXWedgeMoment || f.test_degree > m - 1) continue;
      cols.push_back(f.weight.flatten(m));
      ids.push_back(i);
    }
    MatrixXd a(3 * poly_dim(m, 3), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) a.col(j) = cols[j];
    const VectorXd x = solve_exact(a, qf.flatten(m), "curl decomposition");
    VectorXd r = VectorXd::Zero(n_);
    PolyScalar phi(3, m + 1);
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (ids[j] >= 0)
        r(ids[j]) += vol_ / h_ * x(j);
      else
        phi.coeffs()(-1 - ids[j]) += x(j);
    }
    // int_E curl_x v . grad_xi phi = h sum_f int_f (curl v . n_f) phi
    for (int f = 0; f < e_.num_facets(); ++f) r += h_ * face_rot_row(f, phi);
    return r;
  }

  // int_E v . curl_xi Q, Edge3D, Q of degree m.
  VectorXd curl_row(const PolyVector &qf, int m) const {
    VectorXd r = curl_dot_row(qf, m);
    for (int f = 0; f < e_.num_facets(); ++f) {
      const VectorXd n = e_.polyhedron().faces()[f].frame.n;
      r += face_tangential_row(f, cross(n, qf), m);
    }
    return h_ * r;
  }

private:
  using Key = std::tuple<int, int, int, int, int, int, int>;
  static Key key(DofType t, Entity ent, int idx, const Exponent &ex, int comp) {
    return {static_cast<int>(t), static_cast<int>(ent), idx, ex[0], ex[1], ex[2], comp};
  }

  const MomentCache &mc_;
  const DofLayout &l_;
  const Element &e_;
  int d_;
  double h_, vol_;
  int n_;
  std::map<Key, int> index_;
};

std::vector<int> element_dofs(const DofLayout &l, DofType t, int max_test_degree) {
  std::vector<int> out;
  for (int i = 0; i < l.N(); ++i) {
    const auto &f = l.dofs[i];
    if (f.type == t && f.entity == Entity::Element && f.test_degree <= max_test_degree) out.push_back(i);
  }
  return out;
}

} // namespace

int s_max(const FamilySpec &spec) {
  switch (spec.family) {
  case Family::Face2D:
  case Family::Face3D: return spec.kr + 1;
  case Family::Edge2D: return spec.kd + 1;
  case Family::Edge3D: return std::min({spec.mu_r, spec.beta_d, spec.kd + 1});
  }
  return -1;
}

bool polynomials_in_space(const FamilySpec &f, int s) {
  switch (f.family) {
  case Family::Face2D:
  case Family::Face3D: return s <= f.k && s - 1 <= f.kd;
  case Family::Edge2D: return s <= f.k && s - 1 <= f.kr;
  case Family::Edge3D: return s <= f.beta && s - 1 <= f.beta_r;
  }
  return false;
}

MomentMap moment_map(const MomentCache &mc, const DofLayout &l, int s) {
  const int smax = s_max(l.spec);
  if (s < 0) throw ValidationError("moment map degree must be non-negative, got " + std::to_string(s));
  if (s > smax)
    throw ValidationError("moments of degree " + std::to_string(s) + " are not computable from the DOFs of " +
                          l.spec.str() + ": s_max = " + std::to_string(smax));
  const Rows rows(mc, l);
  const int d = l.spec.dim();
  const int np = d * poly_dim(s, d);

  // Columns: fields whose moments have a row; the target monomials are
  // decomposed in their span.
  std::vector<VectorXd> cols;
  std::vector<VectorXd> col_rows;
  auto add_dofs = [&](const std::vector<int> &ids) {
    for (int i : ids) {
      cols.push_back(l.dofs[i].weight.flatten(s));
      VectorXd r = VectorXd::Zero(l.N());
      r(i) = rows.vol();
      col_rows.push_back(r);
    }
  };

  switch (l.spec.family) {
  case Family::Face2D:
  case Family::Face3D:
    for (const auto &ex : monomials(d, s + 1)) {
      if (exponent_degree(ex) == 0) continue;
      const PolyScalar phi = PolyScalar::monomial(d, ex);
      cols.push_back(grad(phi).flatten(s));
      col_rows.push_back(rows.grad_row(phi));
    }
    add_dofs(element_dofs(l, l.spec.family == Family::Face2D ? DofType::XPerpMoment : DofType::XWedgeMoment,
                          s - 1));
    break;
  case Family::Edge2D:
    for (const auto &ex : monomials(d, s + 1)) {
      if (exponent_degree(ex) == 0) continue;
      const PolyScalar phi = PolyScalar::monomial(d, ex);
      cols.push_back(brot2(phi).flatten(s));
      col_rows.push_back(rows.brot_row(phi));
    }
    add_dofs(element_dofs(l, DofType::XMoment, s - 1));
    break;
  case Family::Edge3D: {
    // Independent curls of e_c xi^alpha, 1 <= |alpha| <= s+1.
    std::vector<PolyVector> cands;
    for (int c = 0; c < 3; ++c)
      for (const auto &ex : monomials(3, s + 1))
        if (exponent_degree(ex) > 0) cands.push_back(PolyVector::unit(c, PolyScalar::monomial(3, ex)));
    MatrixXd m(np, cands.size());
    for (std::size_t j = 0; j < cands.size(); ++j) m.col(j) = curl3(cands[j]).flatten(s);
    for (int j : independent_columns(m)) {
      cols.push_back(m.col(j));
      col_rows.push_back(rows.curl_row(cands[j].padded(s + 1), s + 1));
    }
    add_dofs(element_dofs(l, DofType::XMoment, s - 1));
    break;
  }
  }

  MatrixXd a(np, cols.size()), r(l.N(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    a.col(j) = cols[j];
    r.col(j) = col_rows[j];
  }
  const MatrixXd x = solve_exact(a, MatrixXd::Identity(np, np), "moment decomposition");
  MomentMap out;
  out.s = s;
  out.s_max = smax;
  out.map = (r * x).transpose() / rows.vol();
  return out;
}

MatrixXd l2_projector(const MomentCache &mc, const DofLayout &l, int s) {
  const MomentMap m = moment_map(mc, l, s);
  const MatrixXd g = vector_mass_matrix(mc, s);
  return g.colPivHouseholderQr().solve(m.map);
}

VectorXd interpolate(const MomentCache &mc, const DofLayout &l, const PolyVector &u) { return dof_vector(mc, l, u); }

VectorXd interpolate(const MomentCache &mc, const DofLayout &l, const VectorField &u, int order) {
  const Element &e = mc.element();
  if (order < 0) order = l.spec.degree() + 4;
  const double h = e.h();
  auto integral = [&](const QuadratureRule &q, const PolyVector &g) {
    double sum = 0.0;
    for (int p = 0; p < q.size(); ++p) {
      const VectorXd x = q.points.col(p);
      sum += q.weights(p) * u(x).dot(g(e.to_scaled(x)));
    }
    return sum;
  };
  VectorXd out(l.N());
  for (int i = 0; i < l.N(); ++i) {
    const auto &f = l.dofs[i];
    const int m = order + f.weight.degree() + 1;
    double val = 0.0;
    switch (f.entity) {
    case Entity::Edge: val = integral(edge_rule(e, f.index, m), f.weight); break;
    case Entity::Face: val = integral(face_rule(e, f.index, m), f.weight); break;
    case Entity::Element:
      if (!f.curl_first) {
        val = integral(element_rule(e, m), f.weight);
      } else {
        // int curl_xi u . g = int u . curl_xi g - h sum_f int_f u . (n_f ^ g)
        val = integral(element_rule(e, m), curl3(f.weight));
        for (int fc = 0; fc < e.num_facets(); ++fc) {
          const VectorXd n = e.polyhedron().faces()[fc].frame.n;
          val -= h * integral(face_rule(e, fc, m), cross(n, f.weight));
        }
      }
      break;
    }
    out(i) = val / mc.measure(f.entity, f.index);
  }
  return out;
}

VectorXd reduced_interpolant(const SerendipityReduction &r, const VectorXd &full_dofs) {
  VectorXd sel(r.selected.size());
  for (std::size_t i = 0; i < r.selected.size(); ++i) sel(i) = full_dofs(r.selected[i]);
  return r.E * sel;
}

VectorXd div_moment_row(const MomentCache &mc, const DofLayout &l, const PolyScalar &q) {
  const Rows rows(mc, l);
  const int d = l.spec.dim();
  const auto f = l.spec.family;
  if (f == Family::Edge3D) throw ValidationError("div_moment_row: not defined for edge3d layouts");
  const int deg = f == Family::Edge2D ? l.spec.kr : l.spec.kd;
  const PolyScalar qt = q.trimmed(1e-14);
  if (qt.degree() > deg)
    throw ValidationError("div_moment_row: test degree " + std::to_string(qt.degree()) + " exceeds " +
                          std::to_string(deg));
  const auto &mons = monomials(d, deg);
  const PolyScalar qp = qt.padded(std::max(deg, 0));
  // int div v q = -(1/h) int v . grad_xi q + int_bdry v.n q
  // int rot v q = (1/h) int v . brot_xi q + int_bdry v.t q
  VectorXd r = f == Family::Edge2D ? rows.tangent_boundary_row(qp) : rows.flux_row(qp);
  const DofType t = f == Family::Edge2D ? DofType::BrotMoment : DofType::GradMoment;
  const double sign = f == Family::Edge2D ? 1.0 : -1.0;
  for (std::size_t b = 1; b < mons.size(); ++b)
    if (qp.coeffs()(b) != 0.0)
      r(rows.find(t, Entity::Element, 0, mons[b])) += sign * rows.vol() / rows.h() * qp.coeffs()(b);
  return r;
}

MatrixXd check_b_compat(const MomentCache &mc, const DofLayout &l, const std::vector<PolyVector> &us,
                        const SerendipityReduction *red) {
  const Element &e = mc.element();
  const int d = l.spec.dim();
  const bool rot = l.spec.family == Family::Edge2D;
  const int deg = rot ? l.spec.kr : l.spec.kd;
  const auto &mons = monomials(d, deg);
  std::vector<PolyScalar> qs;
  MatrixXd rows(mons.size(), l.N());
  for (std::size_t b = 0; b < mons.size(); ++b) {
    qs.push_back(PolyScalar::monomial(d, mons[b]));
    rows.row(b) = div_moment_row(mc, l, qs.back()).transpose();
  }
  MatrixXd res(mons.size(), us.size());
  for (std::size_t j = 0; j < us.size(); ++j) {
    VectorXd dofs = interpolate(mc, l, us[j]);
    if (red) dofs = reduced_interpolant(*red, dofs);
    const PolyScalar du = rot ? rot2(us[j], e.h()) : div(us[j], e.h());
    const VectorXd approx = rows * dofs;
    for (std::size_t b = 0; b < mons.size(); ++b) {
      const double exact = integrate_element(e, du * qs[b]);
      res(b, j) = std::abs(exact - approx(b)) / std::max(1.0, std::abs(exact));
    }
  }
  return res;
}

VectorXd check_b_compat(const MomentCache &mc, const DofLayout &l, const PolyVector &u,
                        const SerendipityReduction *red) {
  return check_b_compat(mc, l, std::vector<PolyVector>{u}, red).col(0);
}

MatrixXd derived_rows(const MomentCache &mc, const DofLayout &l) {
  const Rows rows(mc, l);
  MatrixXd out(l.derived.size(), l.N());
  for (std::size_t i = 0; i < l.derived.size(); ++i) {
    const auto &f = l.derived[i];
    const PolyScalar q = compose(PolyScalar::monomial(2, f.test), face_variables(mc.element(), f.index));
    out.row(i) = rows.h() / mc.measure(Entity::Face, f.index) * rows.face_rot_row(f.index, q).transpose();
  }
  return out;
}

MatrixXd check_curl_preserving(const MomentCache &mc, const DofLayout &l, const std::vector<PolyVector> &us,
                               const SerendipityReduction *red) {
  if (l.spec.family != Family::Edge3D) throw ValidationError("check_curl_preserving needs an edge3d layout");
  const MatrixXd dr = derived_rows(mc, l);
  std::vector<int> curl;
  for (int i = 0; i < l.N(); ++i)
    if (l.dofs[i].type == DofType::CurlXWedgeMoment) curl.push_back(i);
  const int nd = static_cast<int>(l.derived.size());
  MatrixXd res(nd + curl.size(), us.size());
  for (std::size_t j = 0; j < us.size(); ++j) {
    const VectorXd full = interpolate(mc, l, us[j]);
    const VectorXd dofs = red ? reduced_interpolant(*red, full) : full;
    const VectorXd approx = dr * dofs;
    for (int i = 0; i < nd; ++i) {
      const double exact = dof_apply(mc, l.derived[i], us[j]);
      res(i, j) = std::abs(exact - approx(i)) / std::max(1.0, std::abs(exact));
    }
    for (std::size_t c = 0; c < curl.size(); ++c)
      res(nd + c, j) = std::abs(full(curl[c]) - dofs(curl[c])) / std::max(1.0, std::abs(full(curl[c])));
  }
  return res;
}

VectorXd check_curl_preserving(const MomentCache &mc, const DofLayout &l, const PolyVector &u,
                               const SerendipityReduction *red) {
  return check_curl_preserving(mc, l, std::vector<PolyVector>{u}, red).col(0);
}

} // namespace vemser
