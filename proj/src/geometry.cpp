#include "vemser/geometry.hpp"

#include "vemser/errors.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace vemser {

namespace {

double cross2(const Vector2d &a, const Vector2d &b) { return a(0) * b(1) - a(1) * b(0); }

double orient(const Vector2d &a, const Vector2d &b, const Vector2d &c) { return cross2(b - a, c - a); }

bool on_segment(const Vector2d &a, const Vector2d &b, const Vector2d &p, double eps) {
  return std::fabs(orient(a, b, p)) <= eps && (p - a).dot(p - b) <= eps;
}

bool segments_intersect(const Vector2d &a, const Vector2d &b, const Vector2d &c, const Vector2d &d, double eps) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) && ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps)))
    return true;
  return on_segment(a, b, c, eps) || on_segment(a, b, d, eps) || on_segment(c, d, a, eps) ||
         on_segment(c, d, b, eps);
}

Simplex make_triangle(const Vector2d &a, const Vector2d &b, const Vector2d &c) {
  Simplex s;
  s.v.resize(2, 3);
  s.v.col(0) = a;
  s.v.col(1) = b;
  s.v.col(2) = c;
  s.measure = 0.5 * orient(a, b, c);
  return s;
}

double tet_volume(const Vector3d &a, const Vector3d &b, const Vector3d &c, const Vector3d &d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

Simplex make_tet(const Vector3d &a, const Vector3d &b, const Vector3d &c, const Vector3d &d) {
  Simplex s;
  s.v.resize(3, 4);
  s.v.col(0) = a;
  s.v.col(1) = b;
  s.v.col(2) = c;
  s.v.col(3) = d;
  s.measure = tet_volume(a, b, c, d);
  return s;
}

} // namespace

// ------------------------------------------------------------------ Polygon

Polygon::Polygon(std::vector<Vector2d> vertices) : verts_(std::move(vertices)) {
  const int n = size();
  if (n < 3) throw ValidationError("polygon needs at least 3 vertices, got " + std::to_string(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) diameter_ = std::max(diameter_, (verts_[i] - verts_[j]).norm());
  if (diameter_ <= 0.0) throw ValidationError("polygon has zero diameter");
  for (int i = 0; i < n; ++i)
    if ((verts_[(i + 1) % n] - verts_[i]).norm() <= 1e-12 * diameter_)
      throw ValidationError("polygon vertices " + std::to_string(i) + " and " + std::to_string((i + 1) % n) +
                            " coincide (degenerate facet " + std::to_string(i) + ")");

  double a = 0.0;
  Vector2d c = Vector2d::Zero();
  // relative to the first vertex to avoid cancellation far from the origin
  const Vector2d base = verts_[0];
  for (int i = 0; i < n; ++i) {
    const Vector2d p = verts_[i] - base, q = verts_[(i + 1) % n] - base;
    const double w = cross2(p, q);
    a += w;
    c += w * (p + q);
  }
  area_ = 0.5 * a;
  if (area_ <= 1e-14 * diameter_ * diameter_)
    throw ValidationError("polygon must have positive signed area (counterclockwise vertices)");
  centroid_ = base + c / (6.0 * area_);

  const double eps = 1e-12 * diameter_ * diameter_;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(verts_[i], verts_[(i + 1) % n], verts_[j], verts_[(j + 1) % n], eps))
        throw ValidationError("polygon is not simple: edges " + std::to_string(i) + " and " + std::to_string(j) +
                              " intersect");
    }

  for (int i = 0; i < n; ++i) {
    PolygonEdge e;
    e.a = i;
    e.b = (i + 1) % n;
    e.p0 = verts_[e.a];
    e.p1 = verts_[e.b];
    e.length = (e.p1 - e.p0).norm();
    e.mid = 0.5 * (e.p0 + e.p1);
    e.tangent = (e.p1 - e.p0) / e.length;
    e.normal = Vector2d(e.tangent(1), -e.tangent(0));
    edges_.push_back(e);
  }
}

bool Polygon::is_convex() const { return reflex_vertices().empty(); }

std::vector<int> Polygon::reflex_vertices() const {
  std::vector<int> out;
  const int n = size();
  const double eps = 1e-12 * diameter_ * diameter_;
  for (int i = 0; i < n; ++i)
    if (orient(verts_[(i + n - 1) % n], verts_[i], verts_[(i + 1) % n]) < -eps) out.push_back(i);
  return out;
}

std::vector<Simplex> Polygon::simplexify() const {
  std::vector<Simplex> out;
  const int n = size();
  if (n == 3) {
    out.push_back(make_triangle(verts_[0], verts_[1], verts_[2]));
    return out;
  }
  if (is_convex()) {
    for (int i = 0; i < n; ++i) out.push_back(make_triangle(centroid_, verts_[i], verts_[(i + 1) % n]));
    return out;
  }
  // Ear clipping.
  const double eps = 1e-12 * diameter_ * diameter_;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  while (idx.size() > 3) {
    const int m = static_cast<int>(idx.size());
    bool clipped = false;
    for (int k = 0; k < m && !clipped; ++k) {
      const Vector2d &a = verts_[idx[(k + m - 1) % m]], &b = verts_[idx[k]], &c = verts_[idx[(k + 1) % m]];
      if (orient(a, b, c) <= eps) continue;
      bool blocked = false;
      for (int j = 0; j < m && !blocked; ++j) {
        if (j == k || j == (k + 1) % m || j == (k + m - 1) % m) continue;
        const Vector2d &p = verts_[idx[j]];
        if (orient(a, b, p) >= -eps && orient(b, c, p) >= -eps && orient(c, a, p) >= -eps) blocked = true;
      }
      if (blocked) continue;
      out.push_back(make_triangle(a, b, c));
      idx.erase(idx.begin() + k);
      clipped = true;
    }
    if (!clipped) throw InvariantError("ear clipping failed on a simple polygon");
  }
  out.push_back(make_triangle(verts_[idx[0]], verts_[idx[1]], verts_[idx[2]]));
  return out;
}

// --------------------------------------------------------------- Polyhedron

Polyhedron::Polyhedron(std::vector<Vector3d> vertices, std::vector<std::vector<int>> faces)
    : verts_(std::move(vertices)) {
  const int nv = static_cast<int>(verts_.size());
  if (nv < 4) throw ValidationError("polyhedron needs at least 4 vertices");
  if (faces.size() < 4) throw ValidationError("polyhedron needs at least 4 faces");
  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j) diameter_ = std::max(diameter_, (verts_[i] - verts_[j]).norm());
  if (diameter_ <= 0.0) throw ValidationError("polyhedron has zero diameter");
  const double h = diameter_;

  // Closed 2-manifold: each directed edge once, with its reverse used once.
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto &fv = faces[f];
    if (fv.size() < 3) throw ValidationError("face " + std::to_string(f) + " has fewer than 3 vertices");
    for (std::size_t i = 0; i < fv.size(); ++i) {
      const int a = fv[i], b = fv[(i + 1) % fv.size()];
      if (a < 0 || a >= nv) throw ValidationError("face " + std::to_string(f) + " references a missing vertex");
      if (++directed[{a, b}] > 1)
        throw ValidationError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                              ") is traversed twice in the same direction; faces must be consistently oriented");
    }
  }
  for (const auto &[ab, cnt] : directed)
    if (!directed.count({ab.second, ab.first}))
      throw ValidationError("polyhedron boundary is not closed: edge (" + std::to_string(ab.first) + "," +
                            std::to_string(ab.second) + ") belongs to a single face");

  std::map<std::pair<int, int>, int> edge_id;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    PolyhedronFace face;
    face.verts = faces[f];
    const int m = static_cast<int>(face.verts.size());
    Vector3d area_vec = Vector3d::Zero();
    const Vector3d base = verts_[face.verts[0]];
    for (int i = 0; i < m; ++i)
      area_vec += (verts_[face.verts[i]] - base).cross(verts_[face.verts[(i + 1) % m]] - base);
    area_vec *= 0.5;
    const double an = area_vec.norm();
    if (an <= 1e-14 * h * h) throw ValidationError("face " + std::to_string(f) + " has zero area");
    LocalFrame fr;
    fr.n = area_vec / an;
    fr.origin = verts_[face.verts[0]];
    Vector3d t = verts_[face.verts[1]] - verts_[face.verts[0]];
    t -= t.dot(fr.n) * fr.n;
    fr.a1 = t.normalized();
    fr.a2 = fr.n.cross(fr.a1);
    for (int i = 0; i < m; ++i)
      if (std::fabs((verts_[face.verts[i]] - fr.origin).dot(fr.n)) > 1e-10 * h)
        throw ValidationError("face " + std::to_string(f) + " is not planar");
    std::vector<Vector2d> loc;
    for (int i = 0; i < m; ++i) loc.push_back(fr.to_local(verts_[face.verts[i]]));
    Polygon tmp;
    try {
      tmp = Polygon(loc);
    } catch (const ValidationError &err) {
      throw ValidationError("face " + std::to_string(f) + ": " + err.what());
    }
    face.centroid = fr.to_global(tmp.centroid());
    fr.origin = face.centroid;
    for (auto &p : loc) p -= tmp.centroid();
    face.local = Polygon(loc);
    face.frame = fr;
    face.area = face.local.area();
    face.diameter = face.local.diameter();

    for (int i = 0; i < m; ++i) {
      const int a = face.verts[i], b = face.verts[(i + 1) % m];
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = edge_id.find(key);
      int id;
      if (it == edge_id.end()) {
        id = static_cast<int>(edges_.size());
        edge_id[key] = id;
        PolyhedronEdge e;
        e.a = key.first;
        e.b = key.second;
        e.p0 = verts_[e.a];
        e.p1 = verts_[e.b];
        e.length = (e.p1 - e.p0).norm();
        e.mid = 0.5 * (e.p0 + e.p1);
        e.tangent = (e.p1 - e.p0) / e.length;
        e.faces[0] = static_cast<int>(f);
        edges_.push_back(e);
      } else {
        id = it->second;
        edges_[id].faces[1] = static_cast<int>(f);
      }
      face.edges.emplace_back(id, a < b ? 1 : -1);
    }
    faces_.push_back(std::move(face));
  }

  Vector3d flux = Vector3d::Zero();
  for (const auto &f : faces_) flux += f.area * f.frame.n;
  if (flux.cwiseAbs().maxCoeff() > 1e-10 * h * h)
    throw ValidationError("face normals are inconsistent: the boundary is not closed");

  // Signed decomposition into tetrahedra from the vertex average.
  Vector3d ref = Vector3d::Zero();
  for (const auto &v : verts_) ref += v;
  ref /= nv;
  Vector3d c = Vector3d::Zero();
  double vol = 0.0;
  for (const auto &f : faces_)
    for (const auto &t : f.local.simplexify()) {
      const Vector3d p0 = f.frame.to_global(t.v.col(0)), p1 = f.frame.to_global(t.v.col(1)),
                     p2 = f.frame.to_global(t.v.col(2));
      const double w = tet_volume(ref, p0, p1, p2);
      vol += w;
      c += w * (ref + p0 + p1 + p2) / 4.0;
    }
  if (vol <= 1e-14 * h * h * h)
    throw ValidationError("polyhedron has non-positive volume; faces must be oriented outward");
  volume_ = vol;
  centroid_ = c / vol;
}

bool Polyhedron::is_convex() const {
  const double eps = 1e-12 * diameter_;
  for (const auto &f : faces_)
    for (const auto &v : verts_)
      if ((v - f.centroid).dot(f.frame.n) > eps) return false;
  return true;
}

std::vector<Simplex> Polyhedron::simplexify() const {
  std::vector<Simplex> out;
  if (is_tetrahedron()) {
    Simplex s = make_tet(verts_[0], verts_[1], verts_[2], verts_[3]);
    if (s.measure < 0) s = make_tet(verts_[0], verts_[2], verts_[1], verts_[3]);
    out.push_back(s);
    return out;
  }
  const double tol = 1e-14 * diameter_ * diameter_ * diameter_;
  for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
    const auto &f = faces_[fi];
    for (const auto &t : f.local.simplexify()) {
      Simplex s = make_tet(centroid_, f.frame.to_global(t.v.col(0)), f.frame.to_global(t.v.col(1)),
                           f.frame.to_global(t.v.col(2)));
      if (s.measure <= tol)
        throw ValidationError("polyhedron is not star-shaped with respect to its centroid (face " +
                              std::to_string(fi) +
                              "); pre-triangulate its faces or split it into star-shaped pieces");
      out.push_back(s);
    }
  }
  return out;
}

// ------------------------------------------------------------------ Element

Element::Element(Polygon p) : dim_(2), polygon_(std::move(p)) {
  origin_ = polygon_.centroid();
  h_ = polygon_.diameter();
}

Element::Element(Polyhedron p) : dim_(3), polyhedron_(std::move(p)) {
  origin_ = polyhedron_.centroid();
  h_ = polyhedron_.diameter();
}

VectorXd Element::centroid() const {
  return dim_ == 2 ? VectorXd(polygon_.centroid()) : VectorXd(polyhedron_.centroid());
}

double Element::measure() const { return dim_ == 2 ? polygon_.area() : polyhedron_.volume(); }

bool Element::is_convex() const { return dim_ == 2 ? polygon_.is_convex() : polyhedron_.is_convex(); }

bool Element::is_simplex() const { return dim_ == 2 ? polygon_.size() == 3 : polyhedron_.is_tetrahedron(); }

int Element::num_facets() const {
  return dim_ == 2 ? polygon_.size() : static_cast<int>(polyhedron_.faces().size());
}

int Element::num_vertices() const {
  return dim_ == 2 ? polygon_.size() : static_cast<int>(polyhedron_.vertices().size());
}

VectorXd Element::vertex(int i) const {
  return dim_ == 2 ? VectorXd(polygon_.vertices()[i]) : VectorXd(polyhedron_.vertices()[i]);
}

Element Element::with_origin(const VectorXd &x0) const {
  if (x0.size() != dim_) throw ValidationError("origin has the wrong dimension");
  Element e = *this;
  e.origin_ = x0;
  return e;
}

std::vector<Simplex> Element::simplexify() const {
  return dim_ == 2 ? polygon_.simplexify() : polyhedron_.simplexify();
}

// -------------------------------------------------------------------- cover

namespace {

struct Facet {
  VectorXd normal;
  double offset = 0.0;
  std::vector<VectorXd> pts;
};

std::vector<Facet> facets_of(const Element &e) {
  std::vector<Facet> out;
  if (e.dim() == 2) {
    for (const auto &ed : e.polygon().edges()) {
      Facet f;
      f.normal = ed.normal;
      f.offset = ed.normal.dot(ed.p0);
      f.pts = {ed.p0, ed.p1};
      out.push_back(f);
    }
  } else {
    const auto &P = e.polyhedron();
    for (const auto &fc : P.faces()) {
      Facet f;
      f.normal = fc.frame.n;
      f.offset = fc.frame.n.dot(fc.centroid);
      for (int v : fc.verts) f.pts.push_back(P.vertices()[v]);
      out.push_back(f);
    }
  }
  return out;
}

bool compatible(const Facet &a, const Facet &b, double h, const CoverOptions &opt) {
  const double c = std::min(1.0, std::fabs(a.normal.dot(b.normal)));
  if (std::acos(c) >= opt.theta0) return false;
  for (const auto &p : b.pts)
    if (std::fabs(a.normal.dot(p) - a.offset) >= opt.dist_tol * h) return false;
  for (const auto &p : a.pts)
    if (std::fabs(b.normal.dot(p) - b.offset) >= opt.dist_tol * h) return false;
  return true;
}

} // namespace

bool facets_compatible(const Element &e, int i, int j, const CoverOptions &opt) {
  const auto f = facets_of(e);
  return compatible(f.at(i), f.at(j), e.h(), opt);
}

Cover eta_cover(const Element &e, const CoverOptions &opt) {
  if (!(opt.theta0 > 0.0 && opt.theta0 <= M_PI / 4 + 1e-15))
    throw ValidationError("theta0 must lie in (0, pi/4]");
  if (!(opt.dist_tol > 0.0)) throw ValidationError("dist_tol must be positive");
  const auto facets = facets_of(e);
  const int nf = static_cast<int>(facets.size());
  const double h = e.h();
  std::vector<std::vector<char>> comp(nf, std::vector<char>(nf, 0));
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j) comp[i][j] = i == j || compatible(facets[i], facets[j], h, opt);

  std::vector<std::vector<int>> best;
  if (nf <= kExactCoverLimit) {
    std::vector<std::vector<int>> cur;
    std::size_t best_size = nf + 1;
    std::function<void(int)> search = [&](int f) {
      if (cur.size() >= best_size) return;
      if (f == nf) {
        best = cur;
        best_size = cur.size();
        return;
      }
      for (auto &g : cur) {
        bool ok = true;
        for (int m : g) ok = ok && comp[f][m];
        if (!ok) continue;
        g.push_back(f);
        search(f + 1);
        g.pop_back();
      }
      cur.push_back({f});
      search(f + 1);
      cur.pop_back();
    };
    search(0);
  } else {
    for (int f = 0; f < nf; ++f) {
      bool placed = false;
      for (auto &g : best) {
        bool ok = true;
        for (int m : g) ok = ok && comp[f][m];
        if (ok) {
          g.push_back(f);
          placed = true;
          break;
        }
      }
      if (!placed) best.push_back({f});
    }
  }

  Cover cov;
  cov.eta = static_cast<int>(best.size());
  cov.groups = best;
  const int d = e.dim();
  const VectorXd xc = e.centroid();
  for (const auto &g : best) {
    std::vector<VectorXd> pts;
    for (int f : g) pts.insert(pts.end(), facets[f].pts.begin(), facets[f].pts.end());
    VectorXd m = VectorXd::Zero(d);
    for (const auto &p : pts) m += p;
    m /= static_cast<double>(pts.size());
    VectorXd n = facets[g.front()].normal;
    if (g.size() > 1) {
      MatrixXd c(d, pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) c.col(i) = pts[i] - m;
      Eigen::JacobiSVD<MatrixXd> svd(c, Eigen::ComputeFullU);
      n = svd.matrixU().col(d - 1);
    }
    double off = n.dot(m);
    if (n.dot(xc) - off < 0) {
      n = -n;
      off = -off;
    }
    double sup = 0.0;
    for (int v = 0; v < e.num_vertices(); ++v) sup = std::max(sup, std::fabs(n.dot(e.vertex(v)) - off));
    cov.normals.push_back(n);
    cov.offsets.push_back(off);
    // l(xi) = (n.(origin + h xi) - off) / sup
    cov.equations.push_back(PolyScalar::affine(n * (h / sup), (n.dot(e.origin()) - off) / sup));
  }
  return cov;
}

PolyScalar bubble_poly(const Cover &c, const Element &e, const CoverOptions &opt) {
  const VectorXd xc = e.centroid();
  PolyScalar b = PolyScalar::constant(e.dim(), 1.0);
  for (int g = 0; g < c.eta; ++g) {
    if (std::fabs(c.normals[g].dot(xc) - c.offsets[g]) < opt.dist_tol * e.h())
      throw ValidationError("element centroid lies on cover line/plane " + std::to_string(g));
    b = b * c.equations[g];
  }
  return b;
}

} // namespace vemser
