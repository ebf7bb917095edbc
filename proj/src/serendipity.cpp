#include "vemser/serendipity.hpp"

#include "vemser/errors.hpp"

#include <algorithm>
#include <set>

namespace vemser {

namespace {

MatrixXd gather(const MatrixXd &D, const std::vector<int> &cols) {
  MatrixXd out(D.rows(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(j) = D.col(cols[j]);
  return out;
}

int rank_of(const MatrixXd &D, const std::vector<int> &cols, double tol) {
  if (cols.empty()) return 0;
  return numerical_rank(equilibrate_columns(gather(D, cols)), tol);
}

std::vector<int> concat(std::vector<int> a, const std::vector<int> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Chooses a subset of tail columns so that kept + subset has full row rank.
// Tail entries must be ordered by nondecreasing degree. limit is the degree
// bound used by ConvexEta and Lazy.
std::vector<int> choose_core(const MatrixXd &D, const std::vector<int> &kept, const std::vector<int> &tail,
                             const std::vector<int> &deg, Strategy st, int limit, double tol,
                             std::vector<std::string> &notes, const std::string &where) {
  const int rows = static_cast<int>(D.rows());
  std::vector<int> chosen;
  if (st == Strategy::Stingy) {
    int r = rank_of(D, kept, tol);
    std::vector<int> cur = kept;
    for (std::size_t j = 0; j < tail.size() && r < rows; ++j) {
      cur.push_back(tail[j]);
      const int r2 = rank_of(D, cur, tol);
      if (r2 > r) {
        r = r2;
        chosen.push_back(tail[j]);
      } else {
        cur.pop_back();
      }
    }
    if (r < rows)
      throw InvariantError(where + ": D has rank " + std::to_string(r) + " < " + std::to_string(rows) +
                           " even with every DOF");
    return chosen;
  }

  std::size_t next = 0;
  if (st == Strategy::ConvexEta || st == Strategy::Lazy)
    while (next < tail.size() && deg[next] <= limit) chosen.push_back(tail[next++]);
  bool escalated = false;
  while (rank_of(D, concat(kept, chosen), tol) < rows) {
    if (next >= tail.size())
      throw InvariantError(where + ": D has rank " + std::to_string(rank_of(D, concat(kept, chosen), tol)) + " < " +
                           std::to_string(rows) + " even with every DOF");
    const int s = deg[next];
    while (next < tail.size() && deg[next] == s) chosen.push_back(tail[next++]);
    escalated = true;
  }
  if (escalated && st != Strategy::Systematic)
    notes.push_back(where + ": " + to_string(st) + " selection was not S-identifying; escalated to degree " +
                    std::to_string(deg[next - 1]));
  return chosen;
}

PolyVector along(const PolyScalar &q, const VectorXd &dir) { return q * PolyVector::constant(dir); }

// Tangential polynomial space on one face, in element coordinates.
SpaceBasis face_space(const Element &e, int f, int beta, bool n1) {
  const auto &fr = e.polyhedron().faces()[f].frame;
  const auto uv = face_variables(e, f);
  const VectorXd a1 = fr.a1, a2 = fr.a2;
  std::vector<PolyVector> m;
  for (const auto &ex : monomials(2, beta)) {
    const PolyScalar q = compose(PolyScalar::monomial(2, ex), uv);
    m.push_back(along(q, a1));
    m.push_back(along(q, a2));
  }
  if (n1)
    for (const auto &ex : monomials(2, beta)) {
      if (exponent_degree(ex) != beta) continue;
      const PolyScalar q = compose(PolyScalar::monomial(2, ex), uv);
      m.push_back(along(q * uv[1], a1) - along(q * uv[0], a2));
    }
  return custom_basis(3, m);
}

} // namespace

std::string to_string(Strategy s) {
  switch (s) {
  case Strategy::ConvexEta: return "convex";
  case Strategy::Lazy: return "lazy";
  case Strategy::Stingy: return "stingy";
  case Strategy::Systematic: return "systematic";
  }
  return "?";
}

Strategy strategy_from_string(const std::string &s) {
  if (s == "convex" || s == "ConvexEta" || s == "convex-eta") return Strategy::ConvexEta;
  if (s == "lazy" || s == "Lazy") return Strategy::Lazy;
  if (s == "stingy" || s == "Stingy") return Strategy::Stingy;
  if (s == "systematic" || s == "Systematic") return Strategy::Systematic;
  throw ValidationError("unknown strategy '" + s + "' (expected convex, lazy, stingy or systematic)");
}

Strategy default_strategy(const Element &e) { return e.is_convex() ? Strategy::ConvexEta : Strategy::Systematic; }

KernelSpace kernel_nullspace(const MatrixXd &D, int M, double tol) {
  if (!(tol > 0)) throw ValidationError("kernel_nullspace: tolerance must be positive");
  if (M < 0 || M > D.cols()) throw ValidationError("kernel_nullspace: M out of range");
  KernelSpace z;
  z.tag = "nullspace";
  z.coeffs = M == 0 ? MatrixXd(MatrixXd::Identity(D.rows(), D.rows())) : left_null_space(equilibrate_columns(D.leftCols(M)), tol);
  z.dim = static_cast<int>(z.coeffs.cols());
  return z;
}

KernelSpace kernel_nullspace(const MatrixXd &D, int M, const SpaceBasis &s, double tol) {
  KernelSpace z = kernel_nullspace(D, M, tol);
  const int n = s.degree();
  const MatrixXd B = s.matrix(n);
  for (int j = 0; j < z.dim; ++j) z.fields.push_back(PolyVector::from_flat(s.d, n, B * z.coeffs.col(j)));
  return z;
}

int zdim_formula(Family f, int k, int eta, bool tetrahedron) {
  switch (f) {
  case Family::Face2D:
  case Family::Edge2D: return poly_dim(k - eta + 1, 2);
  case Family::Face3D:
    if (!tetrahedron)
      throw ValidationError("zdim_formula: the face3d kernel dimension has a closed form only on tetrahedra");
    return 3 * poly_dim(k - 2, 3) - poly_dim(k - 3, 3);
  case Family::Edge3D: return poly_dim(k + 1 - eta, 3);
  }
  return 0;
}

KernelSpace tetra_cups(const Element &tet, int k) { return tetra_cups(tet, k, build_basis(SpaceName::PkVec, k, 3)); }

KernelSpace tetra_cups(const Element &tet, int k, const SpaceBasis &s) {
  if (tet.dim() != 3 || !tet.polyhedron().is_tetrahedron())
    throw ValidationError("tetra_cups: element is not a tetrahedron");
  KernelSpace z;
  z.tag = "cups";
  z.coeffs = MatrixXd(s.size(), 0);
  if (k < 2) return z;

  const auto &faces = tet.polyhedron().faces();
  std::vector<PolyScalar> lambda;
  for (const auto &f : faces) {
    const VectorXd n = f.frame.n;
    lambda.push_back(PolyScalar::affine(n, n.dot(tet.origin() - VectorXd(f.centroid)) / tet.h()));
  }
  std::vector<PolyVector> curls;
  for (int i = 0; i < 4; ++i) {
    PolyScalar b = PolyScalar::constant(3, 1.0);
    for (int j = 0; j < 4; ++j)
      if (j != i) b = b * lambda[j];
    for (const auto &q : scalar_monomials(3, k - 2)) curls.push_back(curl3(along(b * q, VectorXd(faces[i].frame.n))));
  }
  MatrixXd m(3 * poly_dim(k, 3), curls.size());
  for (std::size_t j = 0; j < curls.size(); ++j) m.col(j) = curls[j].flatten(k);
  for (int j : independent_columns(m, 1e-9)) z.fields.push_back(curls[j]);
  z.dim = static_cast<int>(z.fields.size());

  const MatrixXd B = s.matrix(k);
  MatrixXd F(B.rows(), z.dim);
  for (int j = 0; j < z.dim; ++j) F.col(j) = z.fields[j].flatten(k);
  z.coeffs = B.colPivHouseholderQr().solve(F);
  if ((B * z.coeffs - F).norm() > 1e-9 * std::max(1.0, F.norm()))
    throw InvariantError("tetra_cups: curl fields are not contained in the S space");
  return z;
}

Selection choose_dofs(const MomentCache &mc, const DofLayout &l, const MatrixXd &D, Strategy strategy,
                      const ReductionOptions &opt) {
  const Element &e = mc.element();
  if (D.cols() != l.N()) throw ValidationError("choose_dofs: D has the wrong number of columns");
  Selection sel;
  sel.strategy = strategy;
  sel.eta = eta_cover(e, opt.cover).eta;
  if (strategy == Strategy::ConvexEta && !e.is_convex())
    throw ValidationError("choose_dofs: the convex strategy needs a convex element; use systematic or stingy");

  const FamilySpec &sp = l.spec;
  const int k = sp.degree();
  std::vector<int> kept;
  for (int i = 0; i < l.M; ++i) kept.push_back(i);
  std::set<int> face_dropped;

  Strategy st = strategy;
  int limit = 0;
  switch (sp.family) {
  case Family::Face2D:
  case Family::Edge2D: limit = strategy == Strategy::ConvexEta ? k + 1 - sel.eta : k - 2; break;
  case Family::Face3D:
    limit = k - 2;
    if (strategy == Strategy::ConvexEta && !e.polyhedron().is_tetrahedron()) {
      st = Strategy::Systematic;
      sel.notes.push_back("convex strategy on a non-tetrahedral element: no closed-form degree bound, using the "
                          "systematic sweep");
    }
    break;
  case Family::Edge3D: {
    limit = strategy == Strategy::ConvexEta ? k + 1 - sel.eta : k - 3;
    const bool n1 = sp.beta_r == sp.beta;
    for (int f = 0; f < e.num_facets(); ++f) {
      FaceSelection fs;
      fs.face = f;
      const auto &face = e.polyhedron().faces()[f];
      const Element fe{Polygon(face.local)};
      fs.eta = eta_cover(fe, opt.cover).eta;
      std::set<int> fedges;
      for (const auto &pr : face.edges) fedges.insert(pr.first);
      std::vector<int> xs;
      for (int i = 0; i < l.M; ++i) {
        const auto &g = l.dofs[i];
        if (g.entity == Entity::Edge && fedges.count(g.index)) fs.dofs.push_back(i);
        if (g.entity == Entity::Face && g.index == f && g.type == DofType::BrotMoment) fs.dofs.push_back(i);
        if (g.entity == Entity::Face && g.index == f && g.type == DofType::XMoment) xs.push_back(i);
      }
      std::stable_sort(xs.begin(), xs.end(),
                       [&](int a, int b) { return l.dofs[a].test_degree < l.dofs[b].test_degree; });
      fs.kept = static_cast<int>(fs.dofs.size());
      fs.dofs.insert(fs.dofs.end(), xs.begin(), xs.end());
      fs.basis = orthonormal_basis(face_space(e, f, sp.beta, n1), mc);
      const int n = fs.basis.degree();
      MatrixXd phi(fs.dofs.size(), 3 * poly_dim(n, 3));
      for (std::size_t i = 0; i < fs.dofs.size(); ++i)
        phi.row(i) = functional_row(mc, l.dofs[fs.dofs[i]], n).transpose();
      fs.D = (phi * fs.basis.matrix(n)).transpose();

      Strategy fst = strategy;
      if (fst == Strategy::ConvexEta && !face.local.is_convex()) fst = Strategy::Systematic;
      const int flimit = fst == Strategy::ConvexEta ? sp.beta + 1 - fs.eta : sp.beta - 2;
      std::vector<int> lk, lt, ld;
      for (int i = 0; i < fs.kept; ++i) lk.push_back(i);
      for (int i = fs.kept; i < static_cast<int>(fs.dofs.size()); ++i) {
        lt.push_back(i);
        ld.push_back(l.dofs[fs.dofs[i]].test_degree);
      }
      const auto chosen =
          choose_core(fs.D, lk, lt, ld, fst, flimit, opt.rank_tol, sel.notes, "face " + std::to_string(f));
      const std::set<int> cs(chosen.begin(), chosen.end());
      for (int i = 0; i < static_cast<int>(fs.dofs.size()); ++i) {
        if (i < fs.kept || cs.count(i))
          fs.selected.push_back(fs.dofs[i]);
        else
          fs.dropped.push_back(fs.dofs[i]);
      }
      face_dropped.insert(fs.dropped.begin(), fs.dropped.end());
      sel.faces.push_back(std::move(fs));
    }
    kept.clear();
    for (int i = 0; i < l.M; ++i)
      if (!face_dropped.count(i)) kept.push_back(i);
    break;
  }
  }

  std::vector<int> tail, deg;
  for (int i = l.M; i < l.N(); ++i) {
    tail.push_back(i);
    deg.push_back(l.dofs[i].test_degree);
  }
  const auto chosen = choose_core(D, kept, tail, deg, st, limit, opt.rank_tol, sel.notes, "element");
  std::set<int> all(kept.begin(), kept.end());
  all.insert(chosen.begin(), chosen.end());
  for (int i = 0; i < l.N(); ++i) {
    if (all.count(i)) {
      sel.selected.push_back(i);
      if (i >= l.M || (sp.family == Family::Edge3D && l.dofs[i].type == DofType::XMoment)) sel.extra.push_back(i);
    } else {
      sel.dropped.push_back(i);
    }
  }
  return sel;
}

SerendipityReduction build_reduction(const DofLayout &l, const MatrixXd &D, const Selection &sel,
                                     const VectorXd &weights, const ReductionOptions &opt) {
  SerendipityReduction r;
  r.N = l.N();
  r.M = l.M;
  r.S = static_cast<int>(sel.selected.size());
  r.dim_s = static_cast<int>(D.rows());
  r.strategy = sel.strategy;
  r.eta = sel.eta;
  r.selected = sel.selected;
  r.extra = sel.extra;
  r.dropped = sel.dropped;
  r.warnings = sel.notes;

  const MatrixXd DS = gather(D, sel.selected);
  r.singular_values = singular_values(DS);
  if (numerical_rank(equilibrate_columns(DS), opt.rank_tol) < r.dim_s)
    throw InvariantError("build_reduction: the selected DOFs do not identify S (D_S is rank deficient)");
  VectorXd w = weights.size() ? weights : VectorXd(VectorXd::Ones(r.S));
  if (w.size() != r.S || (w.array() <= 0).any())
    throw ValidationError("build_reduction: weights must be positive, one per selected DOF");
  const MatrixXd DW = DS * w.asDiagonal();
  const MatrixXd A = DW * DS.transpose();
  r.condition = condition_number(A);
  if (!(r.condition <= opt.cond_warn))
    r.warnings.push_back("normal equations are ill-conditioned: cond = " + std::to_string(r.condition) +
                         ", min singular value of D_S = " +
                         std::to_string(r.singular_values(r.singular_values.size() - 1)));
  r.P = A.ldlt().solve(DW);

  std::vector<int> pos(r.N, -1);
  for (int j = 0; j < r.S; ++j) pos[sel.selected[j]] = j;
  r.E = MatrixXd::Zero(r.N, r.S);
  for (int j = 0; j < r.S; ++j) r.E(sel.selected[j], j) = 1.0;

  std::set<int> face_dropped;
  for (const auto &fs : sel.faces) {
    std::vector<int> lsel, ldrop;
    for (int i = 0; i < static_cast<int>(fs.dofs.size()); ++i) {
      if (std::find(fs.selected.begin(), fs.selected.end(), fs.dofs[i]) != fs.selected.end())
        lsel.push_back(i);
      else
        ldrop.push_back(i);
    }
    const MatrixXd DfS = gather(fs.D, lsel);
    const MatrixXd Pf = (DfS * DfS.transpose()).ldlt().solve(DfS);
    for (int i : ldrop) {
      const int row = fs.dofs[i];
      face_dropped.insert(row);
      const VectorXd coef = Pf.transpose() * fs.D.col(i);
      for (std::size_t a = 0; a < lsel.size(); ++a) r.E(row, pos[fs.dofs[lsel[a]]]) += coef(a);
    }
  }
  for (int i : sel.dropped)
    if (!face_dropped.count(i)) r.E.row(i) = D.col(i).transpose() * r.P;
  return r;
}

DofFunctional nonconvex_gamma2(const Element &e, int k) {
  if (e.dim() != 2) throw ValidationError("nonconvex_gamma2: needs a polygon");
  if (k < 0) throw ValidationError("nonconvex_gamma2: k must be >= 0");
  const auto reflex = e.polygon().reflex_vertices();
  if (reflex.size() != 1)
    throw ValidationError("nonconvex_gamma2: needs exactly two re-entrant edges (one reflex vertex), found " +
                          std::to_string(reflex.size()) + " reflex vertices");
  const int r = reflex[0];
  const int n = e.polygon().size();
  const auto &ea = e.polygon().edges()[(r + n - 1) % n];
  const auto &eb = e.polygon().edges()[r];
  // xi' = (x - v) / h = xi + (origin - v) / h
  const VectorXd shift = (e.origin() - VectorXd(e.polygon().vertices()[r])) / e.h();
  std::vector<PolyScalar> xp;
  for (int i = 0; i < 2; ++i) {
    VectorXd g = VectorXd::Zero(2);
    g(i) = 1.0;
    xp.push_back(PolyScalar::affine(g, shift(i)));
  }
  const PolyScalar la = xp[0] * ea.normal(0) + xp[1] * ea.normal(1);
  const PolyScalar lb = xp[0] * eb.normal(0) + xp[1] * eb.normal(1);
  const PolyScalar g2 = la * lb;
  DofFunctional f;
  f.type = DofType::XPerpMoment;
  f.entity = Entity::Element;
  f.test_degree = 2;
  f.kept = false;
  f.weight = PolyVector(std::vector<PolyScalar>{xp[1] * g2, -(xp[0] * g2)});
  return f;
}

} // namespace vemser
