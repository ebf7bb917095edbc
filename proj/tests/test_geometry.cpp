#include "doctest.h"
#include "test_util.hpp"

#include "vemser/errors.hpp"
#include "vemser/quadrature.hpp"

#include <functional>

using namespace vemser;
using namespace testutil;

namespace {

// Minimum number of blocks over all set partitions of the facets in which
// every block is pairwise compatible.
int brute_force_eta(const Element &e, const CoverOptions &opt) {
  const int n = e.num_facets();
  std::vector<int> block(n, 0);
  int best = n;
  std::function<void(int, int)> rec = [&](int i, int nblocks) {
    if (i == n) {
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          if (block[a] == block[b] && !facets_compatible(e, a, b, opt)) return;
      best = std::min(best, nblocks);
      return;
    }
    for (int b = 0; b <= nblocks && b < n; ++b) {
      block[i] = b;
      rec(i + 1, std::max(nblocks, b + 1));
    }
  };
  rec(0, 0);
  return best;
}

} // namespace

TEST_CASE("polygon derived quantities") {
  const Element sq = unit_square();
  CHECK(sq.measure() == doctest::Approx(1.0));
  CHECK(sq.h() == doctest::Approx(std::sqrt(2.0)));
  CHECK(sq.centroid()(0) == doctest::Approx(0.5));
  const auto &e0 = sq.polygon().edges()[0];
  CHECK(e0.normal(0) == doctest::Approx(0.0));
  CHECK(e0.normal(1) == doctest::Approx(-1.0));
  CHECK(l_shape().measure() == doctest::Approx(3.0));
}

TEST_CASE("polyhedron derived quantities") {
  const Element c = cube();
  CHECK(c.measure() == doctest::Approx(8.0));
  CHECK(c.centroid().norm() == doctest::Approx(0.0));
  CHECK(c.polyhedron().edges().size() == 12);
  Vector3d flux = Vector3d::Zero();
  for (const auto &f : c.polyhedron().faces()) {
    const auto &fr = f.frame;
    CHECK(std::fabs(fr.a1.dot(fr.a2)) < 1e-14);
    CHECK(std::fabs(fr.a1.norm() - 1) < 1e-14);
    CHECK((fr.a1.cross(fr.a2) - fr.n).norm() < 1e-14);
    CHECK((f.centroid + fr.n).norm() == doctest::Approx(2.0));
    flux += f.area * fr.n;
  }
  CHECK(flux.norm() < 1e-12);
  for (const auto &e : c.polyhedron().edges()) {
    CHECK(e.faces[0] >= 0);
    CHECK(e.faces[1] >= 0);
  }
  const Element t = tetrahedron();
  CHECK(t.measure() == doctest::Approx(1.0 / 6.0));
  CHECK(t.is_simplex());
}

TEST_CASE("validation errors") {
  CHECK_THROWS_AS(polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), ValidationError);         // clockwise
  CHECK_THROWS_AS(polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), ValidationError);         // bow tie
  CHECK_THROWS_AS(polygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), ValidationError);         // repeated vertex
  CHECK_THROWS_AS(Polyhedron({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}}),
                  ValidationError); // open
  CHECK_THROWS_AS(Polyhedron({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                             {{0, 1, 2}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}}),
                  ValidationError); // inconsistent orientation
  CHECK_THROWS_AS(Polyhedron({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                             {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}}),
                  ValidationError); // inward
}

TEST_CASE("convexity") {
  CHECK(unit_square().is_convex());
  CHECK_FALSE(l_shape().is_convex());
  CHECK(tetrahedron().is_convex());
  CHECK(cube().is_convex());
  CHECK_FALSE(dart().is_convex());
  CHECK(dart().polygon().reflex_vertices() == std::vector<int>{3});
}

TEST_CASE("simplexify preserves measure") {
  const Element hex = regular_polygon(6);
  const auto tris = hex.simplexify();
  CHECK(tris.size() == 6);
  double a = 0;
  for (const auto &t : tris) a += t.measure;
  CHECK(a == doctest::Approx(3 * std::sqrt(3.0) / 2).epsilon(1e-12));
  for (const Element &e : {unit_square(), l_shape(), dart(), regular_polygon(5), cube(), tetrahedron()}) {
    double m = 0;
    for (const auto &s : e.simplexify()) {
      CHECK(s.measure > 0);
      m += s.measure;
    }
    CHECK(m == doctest::Approx(e.measure()).epsilon(1e-12));
  }
  CHECK(tetrahedron().simplexify().size() == 1);
}

TEST_CASE("eta cover") {
  CoverOptions tight;
  tight.theta0 = 0.01;
  CHECK(eta_cover(unit_square(), tight).eta == 4);
  CHECK(eta_cover(regular_polygon(3)).eta == 3);
  CHECK(eta_cover(regular_polygon(6)).eta == 6);
  CHECK(eta_cover(cube()).eta == 6);
  CHECK(eta_cover(tetrahedron()).eta == 4);
  // a vertex with a straight angle merges two edges into one line
  const Element flat = polygon({{0, 0}, {1, 0}, {2, 0}, {2, 1}, {0, 1}});
  CHECK(eta_cover(flat).eta == 4);
  // the two top edges of a U share a line
  const Element u = polygon({{0, 0}, {3, 0}, {3, 2}, {2, 2}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  CHECK(eta_cover(u).eta == 7);
  for (const Element &e : {unit_square(), regular_polygon(6), l_shape(), dart(), flat, u, cube(), tetrahedron()}) {
    const Cover c = eta_cover(e);
    CHECK(c.eta == brute_force_eta(e, {}));
    CHECK(c.eta <= e.num_facets());
    int covered = 0;
    for (const auto &g : c.groups) covered += static_cast<int>(g.size());
    CHECK(covered == e.num_facets());
  }
  // many facets: greedy path still returns a valid cover
  CHECK(eta_cover(regular_polygon(24)).eta == 24);
}

TEST_CASE("bubble polynomial") {
  const Element sq = unit_square();
  const Cover c = eta_cover(sq);
  const PolyScalar b = bubble_poly(c, sq);
  CHECK(b.degree() == 4);
  CHECK(b(sq.to_scaled(sq.centroid())) == doctest::Approx(1.0 / 16.0));
  // proportional to x(1-x)y(1-y)
  std::mt19937 rng(3);
  const VectorXd x0 = Eigen::Vector2d(0.3, 0.6);
  const double ratio = b(sq.to_scaled(x0)) / (0.3 * 0.7 * 0.6 * 0.4);
  for (int t = 0; t < 5; ++t) {
    VectorXd x = random_point(rng, 2).array() + 0.5;
    CHECK(b(sq.to_scaled(x)) == doctest::Approx(ratio * x(0) * (1 - x(0)) * x(1) * (1 - x(1))));
  }
  const Element tri = ref_triangle();
  const PolyScalar bt = bubble_poly(eta_cover(tri), tri);
  const double rt = bt(tri.to_scaled(Eigen::Vector2d(0.2, 0.3))) / (0.2 * 0.3 * 0.5);
  CHECK(bt(tri.to_scaled(Eigen::Vector2d(0.1, 0.7))) == doctest::Approx(rt * 0.1 * 0.7 * 0.2));

  for (const Element &e : {sq, tri, regular_polygon(6), regular_polygon(5)}) {
    const PolyScalar be = bubble_poly(eta_cover(e), e);
    CHECK(be(e.to_scaled(e.centroid())) > 0);
    for (int i = 0; i < e.num_facets(); ++i) {
      const QuadratureRule r = edge_rule(e, i, 9);
      CHECK(r.size() == 5);
      for (int k = 0; k < r.size(); ++k) CHECK(std::fabs(be(e.to_scaled(r.points.col(k)))) < 1e-10);
    }
  }
  for (const Element &e : {cube(), tetrahedron()}) {
    const PolyScalar be = bubble_poly(eta_cover(e), e);
    for (int f = 0; f < e.num_facets(); ++f) {
      const QuadratureRule r = face_rule(e, f, 4);
      for (int k = 0; k < r.size(); ++k) CHECK(std::fabs(be(e.to_scaled(r.points.col(k)))) < 1e-10);
    }
  }
}

TEST_CASE("bubble rejects a centroid on a cover line") {
  const double a = 1 + std::sqrt(2.0);
  const Element e = polygon({{0, 0}, {a, 0}, {a, 1}, {1, 1}, {1, 2}, {0, 2}});
  CHECK(e.centroid()(0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(bubble_poly(eta_cover(e), e), ValidationError);
}

TEST_CASE("divergence theorem on polygons for monomials up to degree 6") {
  for (const Element &e : {unit_square(), l_shape(), dart(), regular_polygon(5)}) {
    for (const auto &ex : monomials(2, 6)) {
      const PolyScalar q = PolyScalar::monomial(2, ex);
      const PolyVector g = grad(q, e.h());
      for (int c = 0; c < 2; ++c) {
        double bnd = 0;
        for (int i = 0; i < e.num_facets(); ++i)
          bnd += e.polygon().edges()[i].normal(c) * integrate_edge(e, i, q);
        const double vol = integrate_element(e, g[c]);
        CHECK(std::fabs(bnd - vol) <= 1e-10 * std::max(1.0, std::fabs(vol)));
      }
    }
  }
}
