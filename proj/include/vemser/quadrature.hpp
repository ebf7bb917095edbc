#pragma once

#include "vemser/geometry.hpp"
#include "vemser/polynomial.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>

namespace vemser {

/// Points are stored as columns.
struct QuadratureRule {
  MatrixXd points;
  VectorXd weights;
  int degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Highest polynomial degree any rule is built for.
inline constexpr int kMaxQuadratureDegree = 40;

/// n-point Gauss-Legendre rule on [0, 1].
QuadratureRule gauss_legendre01(int n);

/// Collapsed Gauss rule on the reference simplex of dimension d (1, 2 or 3),
/// exact for degree m. Cached and checked against closed-form moments.
const QuadratureRule &reference_simplex_rule(int d, int m);

/// Rule on an arbitrary simplex (vertex columns), exact for degree m.
QuadratureRule simplex_rule(const MatrixXd &vertices, int m);

/// Rules in physical coordinates for the pieces of an element.
QuadratureRule segment_rule(const VectorXd &p0, const VectorXd &p1, int m);
QuadratureRule element_rule(const Element &e, int m);
QuadratureRule face_rule(const Element &e, int face, int m);
QuadratureRule edge_rule(const Element &e, int edge, int m);

// Exact integrals of polynomials given in the element's scaled coordinates.
double integrate_edge(const Element &e, int edge, const PolyScalar &p);
double integrate_polygon(const Element &e, const PolyScalar &p);
double integrate_face(const Element &e, int face, const PolyScalar &p);
double integrate_polyhedron(const Element &e, const PolyScalar &p);
double integrate_element(const Element &e, const PolyScalar &p);

/// Sum of w * f(x) over a rule.
double integrate_rule(const QuadratureRule &r, const std::function<double(const VectorXd &)> &f);

/// Values of every scaled monomial of degree <= n at point x (physical).
VectorXd monomial_values(const Element &e, const VectorXd &x, int n);

/// Kind of entity a moment refers to.
enum class Entity { Element, Face, Edge };

/// Normalized monomial moments (1/|ent|) * integral of xi^alpha over an
/// entity of one element, grown lazily and shared between threads.
class MomentCache {
public:
  explicit MomentCache(const Element &e) : elem_(e) {}
  MomentCache(const MomentCache &) = delete;
  MomentCache &operator=(const MomentCache &) = delete;

  const Element &element() const { return elem_; }
  /// Moments up to degree n (graded-lex, element dimension).
  VectorXd moments(Entity kind, int index, int n) const;
  double measure(Entity kind, int index) const;

private:
  Element elem_;
  mutable std::mutex mtx_;
  mutable std::map<std::pair<int, int>, VectorXd> cache_;
};

} // namespace vemser
