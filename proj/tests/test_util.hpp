#pragma once

#include "vemser/geometry.hpp"
#include "vemser/polynomial.hpp"

#include <cmath>
#include <random>

namespace testutil {

using namespace vemser;

inline Element polygon(std::vector<Vector2d> v) { return Element(Polygon(std::move(v))); }

inline Element unit_square() { return polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
inline Element ref_triangle() { return polygon({{0, 0}, {1, 0}, {0, 1}}); }
inline Element regular_polygon(int n, double r = 1.0) {
  std::vector<Vector2d> v;
  for (int i = 0; i < n; ++i) v.emplace_back(r * std::cos(2 * M_PI * i / n), r * std::sin(2 * M_PI * i / n));
  return polygon(v);
}
inline Element l_shape() { return polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}); }
/// Quadrilateral with one reflex vertex at (1,2).
inline Element dart() { return polygon({{0, 0}, {4, 2}, {0, 4}, {1, 2}}); }

inline Element tetrahedron() {
  return Element(Polyhedron({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}}));
}

inline Element box(double a0, double a1) {
  std::vector<Vector3d> v = {{a0, a0, a0}, {a1, a0, a0}, {a1, a1, a0}, {a0, a1, a0},
                             {a0, a0, a1}, {a1, a0, a1}, {a1, a1, a1}, {a0, a1, a1}};
  std::vector<std::vector<int>> f = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                     {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  return Element(Polyhedron(v, f));
}
inline Element cube() { return box(-1.0, 1.0); }

/// Physical coordinate x_i written in the element's scaled variables.
inline PolyScalar physical_coordinate(const Element &e, int i) {
  VectorXd g = VectorXd::Zero(e.dim());
  g(i) = e.h();
  return PolyScalar::affine(g, e.origin()(i));
}

inline PolyScalar random_scalar(std::mt19937 &rng, int d, int k) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PolyScalar p(d, k);
  for (int i = 0; i < p.coeffs().size(); ++i) p.coeffs()(i) = u(rng);
  return p;
}

inline PolyVector random_vector(std::mt19937 &rng, int d, int k) {
  std::vector<PolyScalar> c;
  for (int i = 0; i < d; ++i) c.push_back(random_scalar(rng, d, k));
  return PolyVector(c);
}

inline VectorXd random_point(std::mt19937 &rng, int d) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  VectorXd x(d);
  for (int i = 0; i < d; ++i) x(i) = u(rng);
  return x;
}

} // namespace testutil

namespace testutil {

/// Image of an element under x -> s x + t.
inline Element scaled_copy(const Element &e, double s, const VectorXd &t) {
  if (e.dim() == 2) {
    std::vector<Vector2d> v;
    for (const auto &p : e.polygon().vertices()) v.push_back(s * p + Vector2d(t));
    return polygon(v);
  }
  std::vector<Vector3d> v;
  for (const auto &p : e.polyhedron().vertices()) v.push_back(s * p + Vector3d(t));
  std::vector<std::vector<int>> f;
  for (const auto &face : e.polyhedron().faces()) f.push_back(face.verts);
  return Element(Polyhedron(v, f));
}

} // namespace testutil
