#include "vemser/quadrature.hpp"

#include "vemser/errors.hpp"

#include <cmath>

namespace vemser {

QuadratureRule gauss_legendre01(int n) {
  QuadratureRule r;
  r.points.resize(1, n);
  r.weights.resize(n);
  r.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.points(0, i) = 0.5 * (1.0 - x);
    r.weights(i) = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Closed form: integral of x^a y^b z^c over the unit simplex.
double simplex_moment(int d, const Exponent &e) {
  double num = 1.0;
  int s = 0;
  for (int i = 0; i < d; ++i) {
    num *= factorial(e[i]);
    s += e[i];
  }
  return num / factorial(s + d);
}

QuadratureRule build_reference(int d, int m) {
  const int n = std::max(1, (m + d + 1) / 2);
  const QuadratureRule g = gauss_legendre01(n);
  QuadratureRule r;
  r.degree = m;
  if (d == 1) {
    r.points = g.points;
    r.weights = g.weights;
  } else if (d == 2) {
    r.points.resize(2, n * n);
    r.weights.resize(n * n);
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j, ++k) {
        const double u = g.points(0, i), v = g.points(0, j);
        r.points(0, k) = u;
        r.points(1, k) = v * (1.0 - u);
        r.weights(k) = g.weights(i) * g.weights(j) * (1.0 - u);
      }
  } else {
    r.points.resize(3, n * n * n);
    r.weights.resize(n * n * n);
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l, ++k) {
          const double u = g.points(0, i), v = g.points(0, j), w = g.points(0, l);
          r.points(0, k) = u;
          r.points(1, k) = v * (1.0 - u);
          r.points(2, k) = w * (1.0 - v) * (1.0 - u);
          r.weights(k) = g.weights(i) * g.weights(j) * g.weights(l) * (1.0 - u) * (1.0 - u) * (1.0 - v);
        }
  }
  // Exactness check against closed-form moments.
  const auto &mons = monomials(d, m);
  VectorXd sums = VectorXd::Zero(mons.size());
  std::array<std::vector<double>, 3> pw;
  for (int k = 0; k < r.size(); ++k) {
    for (int i = 0; i < d; ++i) {
      pw[i].assign(m + 1, 1.0);
      for (int j = 1; j <= m; ++j) pw[i][j] = pw[i][j - 1] * r.points(i, k);
    }
    for (std::size_t a = 0; a < mons.size(); ++a) {
      double t = r.weights(k);
      for (int i = 0; i < d; ++i) t *= pw[i][mons[a][i]];
      sums(a) += t;
    }
  }
  for (std::size_t a = 0; a < mons.size(); ++a) {
    const double exact = simplex_moment(d, mons[a]);
    if (std::fabs(sums(a) - exact) > 1e-12 * exact)
      throw InvariantError("reference simplex rule (d=" + std::to_string(d) + ", degree " + std::to_string(m) +
                           ") failed its exactness check");
  }
  return r;
}

} // namespace

const QuadratureRule &reference_simplex_rule(int d, int m) {
  if (m > kMaxQuadratureDegree)
    throw ValidationError("quadrature degree " + std::to_string(m) + " exceeds the maximum of " +
                          std::to_string(kMaxQuadratureDegree));
  if (d < 1 || d > 3) throw ValidationError("reference_simplex_rule: dimension must be 1, 2 or 3");
  m = std::max(m, 0);
  static std::mutex mtx;
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find({d, m});
    if (it != cache.end()) return it->second;
  }
  QuadratureRule r = build_reference(d, m);
  std::lock_guard<std::mutex> lock(mtx);
  return cache.emplace(std::make_pair(d, m), std::move(r)).first->second;
}

QuadratureRule simplex_rule(const MatrixXd &v, int m) {
  const int d = static_cast<int>(v.cols()) - 1;
  const QuadratureRule &ref = reference_simplex_rule(d, m);
  MatrixXd jac(v.rows(), d);
  for (int i = 0; i < d; ++i) jac.col(i) = v.col(i + 1) - v.col(0);
  double det;
  if (jac.rows() == jac.cols())
    det = std::fabs(jac.determinant());
  else
    det = std::sqrt(std::fabs((jac.transpose() * jac).determinant()));
  QuadratureRule r;
  r.degree = m;
  r.points = (jac * ref.points).colwise() + v.col(0);
  r.weights = ref.weights * det;
  return r;
}

QuadratureRule segment_rule(const VectorXd &p0, const VectorXd &p1, int m) {
  MatrixXd v(p0.size(), 2);
  v.col(0) = p0;
  v.col(1) = p1;
  return simplex_rule(v, m);
}

namespace {

QuadratureRule concat(const std::vector<QuadratureRule> &parts, int m) {
  int n = 0;
  for (const auto &p : parts) n += p.size();
  QuadratureRule r;
  r.degree = m;
  r.points.resize(parts.front().points.rows(), n);
  r.weights.resize(n);
  int k = 0;
  for (const auto &p : parts) {
    r.points.middleCols(k, p.size()) = p.points;
    r.weights.segment(k, p.size()) = p.weights;
    k += p.size();
  }
  return r;
}

} // namespace

QuadratureRule element_rule(const Element &e, int m) {
  std::vector<QuadratureRule> parts;
  for (const auto &s : e.simplexify()) parts.push_back(simplex_rule(s.v, m));
  return concat(parts, m);
}

QuadratureRule face_rule(const Element &e, int face, int m) {
  if (e.dim() != 3) throw ValidationError("face_rule: element is not a polyhedron");
  const auto &f = e.polyhedron().faces().at(face);
  std::vector<QuadratureRule> parts;
  for (const auto &s : f.local.simplexify()) {
    QuadratureRule r = simplex_rule(s.v, m);
    MatrixXd pts(3, r.size());
    for (int k = 0; k < r.size(); ++k) pts.col(k) = f.frame.to_global(r.points.col(k));
    r.points = pts;
    parts.push_back(r);
  }
  return concat(parts, m);
}

QuadratureRule edge_rule(const Element &e, int edge, int m) {
  if (e.dim() == 2) {
    const auto &ed = e.polygon().edges().at(edge);
    return segment_rule(ed.p0, ed.p1, m);
  }
  const auto &ed = e.polyhedron().edges().at(edge);
  return segment_rule(ed.p0, ed.p1, m);
}

double integrate_rule(const QuadratureRule &r, const std::function<double(const VectorXd &)> &f) {
  double s = 0.0;
  for (int k = 0; k < r.size(); ++k) s += r.weights(k) * f(r.points.col(k));
  return s;
}

namespace {

double integrate_scaled(const Element &e, const QuadratureRule &r, const PolyScalar &p) {
  double s = 0.0;
  for (int k = 0; k < r.size(); ++k) s += r.weights(k) * p(e.to_scaled(r.points.col(k)));
  return s;
}

} // namespace

double integrate_edge(const Element &e, int edge, const PolyScalar &p) {
  return integrate_scaled(e, edge_rule(e, edge, p.degree()), p);
}

double integrate_polygon(const Element &e, const PolyScalar &p) {
  if (e.dim() != 2) throw ValidationError("integrate_polygon: element is not a polygon");
  return integrate_scaled(e, element_rule(e, p.degree()), p);
}

double integrate_face(const Element &e, int face, const PolyScalar &p) {
  return integrate_scaled(e, face_rule(e, face, p.degree()), p);
}

double integrate_polyhedron(const Element &e, const PolyScalar &p) {
  if (e.dim() != 3) throw ValidationError("integrate_polyhedron: element is not a polyhedron");
  return integrate_scaled(e, element_rule(e, p.degree()), p);
}

double integrate_element(const Element &e, const PolyScalar &p) {
  return integrate_scaled(e, element_rule(e, p.degree()), p);
}

VectorXd monomial_values(const Element &e, const VectorXd &x, int n) {
  const int d = e.dim();
  const VectorXd xi = e.to_scaled(x);
  std::array<std::vector<double>, 3> pw;
  for (int i = 0; i < d; ++i) {
    pw[i].assign(n + 1, 1.0);
    for (int j = 1; j <= n; ++j) pw[i][j] = pw[i][j - 1] * xi(i);
  }
  const auto &mons = monomials(d, n);
  VectorXd out(mons.size());
  for (std::size_t a = 0; a < mons.size(); ++a) {
    double t = 1.0;
    for (int i = 0; i < d; ++i) t *= pw[i][mons[a][i]];
    out(a) = t;
  }
  return out;
}

double MomentCache::measure(Entity kind, int index) const {
  switch (kind) {
  case Entity::Element: return elem_.measure();
  case Entity::Face: return elem_.polyhedron().faces().at(index).area;
  case Entity::Edge:
    return elem_.dim() == 2 ? elem_.polygon().edges().at(index).length
                            : elem_.polyhedron().edges().at(index).length;
  }
  return 0.0;
}

VectorXd MomentCache::moments(Entity kind, int index, int n) const {
  const int key_kind = static_cast<int>(kind);
  const auto key = std::make_pair(key_kind * 1000000 + index, 0);
  const int len = poly_dim(n, elem_.dim());
  {
    std::lock_guard<std::mutex> lock(mtx_);
    auto it = cache_.find(key);
    if (it != cache_.end() && it->second.size() >= len) return it->second.head(len);
  }
  QuadratureRule r;
  switch (kind) {
  case Entity::Element: r = element_rule(elem_, n); break;
  case Entity::Face: r = face_rule(elem_, index, n); break;
  case Entity::Edge: r = edge_rule(elem_, index, n); break;
  }
  VectorXd m = VectorXd::Zero(len);
  for (int k = 0; k < r.size(); ++k) m += r.weights(k) * monomial_values(elem_, r.points.col(k), n);
  m /= measure(kind, index);
  std::lock_guard<std::mutex> lock(mtx_);
  auto &slot = cache_[key];
  if (slot.size() < m.size()) slot = m;
  return m;
}

} // namespace vemser
