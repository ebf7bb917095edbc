#include "doctest.h"
#include "test_util.hpp"

#include "vemser/errors.hpp"
#include "vemser/projection.hpp"

#include <cmath>

using namespace vemser;
using namespace testutil;

namespace {

// Moments (1/|E|) int_E v . e_c xi^alpha by direct quadrature.
VectorXd quadrature_moments(const Element &e, const PolyVector &v, int s) {
  const int d = e.dim();
  const auto &mons = monomials(d, s);
  VectorXd out(d * mons.size());
  for (int c = 0; c < d; ++c)
    for (std::size_t a = 0; a < mons.size(); ++a)
      out(c * mons.size() + a) = integrate_element(e, v[c] * PolyScalar::monomial(d, mons[a])) / e.measure();
  return out;
}

std::vector<FamilySpec> specs_for(int d, int k) {
  if (d == 2)
    return {FamilySpec::face2d(k, k - 1, k - 1), FamilySpec::face2d(k, k, k - 1), FamilySpec::edge2d(k, k - 1, k - 1),
            FamilySpec::edge2d(k, k - 1, k)};
  std::vector<FamilySpec> out = {FamilySpec::face3d(k, k - 1, k - 1), FamilySpec::face3d(k, k, k - 1),
                                 FamilySpec::n1like(k)};
  if (k >= 2) out.push_back(FamilySpec::n2like(k));
  return out;
}

// ||q - p||_{L2(E)} / ||p||_{L2(E)} for coefficient vectors at degree s.
double l2_error(const MomentCache &mc, const VectorXd &q, const PolyVector &p, int s) {
  const MatrixXd g = vector_mass_matrix(mc, s);
  const VectorXd pf = p.flatten(s), dq = q - pf;
  return std::sqrt(std::max(0.0, dq.dot(g * dq)) / std::max(1e-300, pf.dot(g * pf)));
}

std::vector<Element> elements2d() { return {ref_triangle(), unit_square(), regular_polygon(5), l_shape(), dart()}; }

} // namespace

TEST_CASE("s_max per family") {
  CHECK(s_max(FamilySpec::face2d(2, 1, 1)) == 2);
  CHECK(s_max(FamilySpec::face2d(2, 1, -1)) == 0);
  CHECK(s_max(FamilySpec::edge2d(3, 1, 2)) == 2);
  CHECK(s_max(FamilySpec::face3d(3, 2, 0)) == 1);
  CHECK(s_max(FamilySpec::n2like(2)) == 0);
  CHECK(s_max(FamilySpec::n1like(3)) == 2);
  CHECK(s_max(FamilySpec::edge3d(3, 0, 2, 2, 2)) == 0);

  // With the boundary and divergence DOFs fixed, the threshold follows kr alone.
  const Element e = unit_square();
  MomentCache mc(e);
  for (int kr = -1; kr <= 3; ++kr) {
    const FamilySpec f = FamilySpec::face2d(3, 2, kr);
    CHECK(s_max(f) == kr + 1);
    const DofLayout l = build_layout(f, e);
    CHECK_NOTHROW(moment_map(mc, l, kr + 1));
    CHECK_THROWS_AS(moment_map(mc, l, kr + 2), ValidationError);
  }
}

TEST_CASE("threshold violation names s_max") {
  const Element e = tetrahedron();
  MomentCache mc(e);
  const DofLayout l = build_layout(FamilySpec::n2like(2), e);
  CHECK_NOTHROW(moment_map(mc, l, 0));
  try {
    moment_map(mc, l, 1);
    FAIL("expected a ValidationError");
  } catch (const ValidationError &err) {
    CHECK(std::string(err.what()).find("s_max = 0") != std::string::npos);
  }
  CHECK_THROWS_AS(moment_map(mc, l, -1), ValidationError);
  CHECK_THROWS_AS(l2_projector(mc, build_layout(FamilySpec::n2like(1), e), 0), ValidationError);
}

TEST_CASE("moment map and projection reproduce polynomials in 2D") {
  std::mt19937 rng(11);
  for (const Element &e : elements2d()) {
    MomentCache mc(e);
    for (int k = 1; k <= 4; ++k)
      for (const FamilySpec &f : specs_for(2, k)) {
        const DofLayout l = build_layout(f, e);
        for (int s = 0; s <= s_max(f); ++s) {
          if (!polynomials_in_space(f, s)) continue;
          const MomentMap mm = moment_map(mc, l, s);
          const MatrixXd pi = l2_projector(mc, l, s);
          for (int t = 0; t < 3; ++t) {
            const PolyVector p = random_vector(rng, 2, s);
            const VectorXd dofs = interpolate(mc, l, p);
            const VectorXd ref = quadrature_moments(e, p, s);
            CAPTURE(f.str());
            CAPTURE(s);
            CHECK((mm.map * dofs - ref).norm() <= 1e-9 * std::max(1.0, ref.norm()));
            CHECK(l2_error(mc, pi * dofs, p, s) <= 1e-9);
            // Monomial coefficients inherit cond(Gram) ~ 1e8 on the triangle at s = 4.
            CHECK((pi * dofs - p.flatten(s)).norm() <= 1e-7 * std::max(1.0, p.flatten(s).norm()));
          }
        }
      }
  }
}

TEST_CASE("moment map and projection reproduce polynomials in 3D") {
  std::mt19937 rng(12);
  for (const Element &e : {tetrahedron(), cube()}) {
    MomentCache mc(e);
    for (int k = 1; k <= 3; ++k)
      for (const FamilySpec &f : specs_for(3, k)) {
        const DofLayout l = build_layout(f, e);
        for (int s = 0; s <= s_max(f); ++s) {
          if (!polynomials_in_space(f, s)) continue;
          const MatrixXd pi = l2_projector(mc, l, s);
          for (int t = 0; t < 2; ++t) {
            const PolyVector p = random_vector(rng, 3, s);
            CAPTURE(f.str());
            CAPTURE(s);
            CHECK(l2_error(mc, pi * interpolate(mc, l, p), p, s) <= 1e-9);
          }
        }
      }
  }
}

TEST_CASE("projection of (xi1^3, 0) on the unit square") {
  const Element e = unit_square();
  MomentCache mc(e);
  const DofLayout l = build_layout(FamilySpec::face2d(3, 2, 1), e);
  PolyVector v(2, 3);
  v[0].coeffs()(monomial_index({3, 0, 0}, 2)) = 1.0;
  const VectorXd c = l2_projector(mc, l, 1) * interpolate(mc, l, v);
  // xi1 ranges over [-a, a] with a = 1/(2 sqrt 2); the odd cubic projects to
  // (3 a^2 / 5) xi1 = (3/40) xi1.
  VectorXd expected = VectorXd::Zero(6);
  expected(monomial_index({1, 0, 0}, 2)) = 3.0 / 40.0;
  CHECK((c - expected).norm() < 1e-12);

  // Same answer from an independent least-squares fit on quadrature nodes.
  const QuadratureRule q = element_rule(e, 8);
  MatrixXd a(q.size(), 3);
  VectorXd b(q.size());
  for (int i = 0; i < q.size(); ++i) {
    const VectorXd xi = e.to_scaled(q.points.col(i));
    const double w = std::sqrt(q.weights(i));
    a.row(i) << w, w * xi(0), w * xi(1);
    b(i) = w * std::pow(xi(0), 3);
  }
  const VectorXd ls = a.colPivHouseholderQr().solve(b);
  CHECK(std::abs(ls(1) - c(1)) < 1e-12);
  CHECK(std::abs(ls(0) - c(0)) < 1e-12);
}

TEST_CASE("callable interpolation") {
  std::mt19937 rng(13);
  for (const Element &e : {unit_square(), tetrahedron()}) {
    MomentCache mc(e);
    const int d = e.dim();
    const FamilySpec f = d == 2 ? FamilySpec::edge2d(2, 1, 1) : FamilySpec::n1like(2);
    const DofLayout l = build_layout(f, e);
    const PolyVector p = random_vector(rng, d, 3);
    const VectorField u = [&](const VectorXd &x) { return p(e.to_scaled(x)); };
    const VectorXd exact = interpolate(mc, l, p);
    CHECK((interpolate(mc, l, u) - exact).norm() < 1e-11 * std::max(1.0, exact.norm()));
  }
  // Smooth non-polynomial input: higher orders agree to rounding.
  const Element e = regular_polygon(6);
  MomentCache mc(e);
  const DofLayout l = build_layout(FamilySpec::face2d(2, 1, 1), e);
  const VectorField u = [](const VectorXd &x) {
    VectorXd r(2);
    r << std::sin(x(0)) * std::exp(x(1)), std::cos(x(0) * x(1));
    return r;
  };
  const VectorXd lo = interpolate(mc, l, u), hi = interpolate(mc, l, u, 20), top = interpolate(mc, l, u, 30);
  CHECK((lo - top).norm() < 1e-6);
  CHECK((hi - top).norm() < 1e-13);
}

TEST_CASE("B-compatibility of the interpolant") {
  std::mt19937 rng(14);
  {
    const Element e = unit_square();
    MomentCache mc(e);
    const DofLayout l = build_layout(FamilySpec::face2d(2, 1, 1), e);
    PolyVector u(2, 3);
    u[0].coeffs()(monomial_index({3, 0, 0}, 2)) = 1.0;
    u[1].coeffs()(monomial_index({0, 3, 0}, 2)) = 1.0;
    CHECK(check_b_compat(mc, l, u).maxCoeff() < 1e-12);
  }
  for (const Element &e : {ref_triangle(), regular_polygon(5), l_shape(), tetrahedron(), cube()}) {
    MomentCache mc(e);
    for (int k = 1; k <= 2; ++k)
      for (const FamilySpec &f : specs_for(e.dim(), k)) {
        if (f.family == Family::Edge3D) continue;
        const DofLayout l = build_layout(f, e);
        const SpaceBasis s = default_s_basis(f, mc);
        const MatrixXd D = dof_matrix(mc, l, s);
        const SerendipityReduction red = build_reduction(l, D, choose_dofs(mc, l, D, default_strategy(e)));
        for (int t = 0; t < 5; ++t) {
          const PolyVector u = random_vector(rng, e.dim(), k + 2);
          CAPTURE(f.str());
          CHECK(check_b_compat(mc, l, u).maxCoeff() <= 1e-10);
          CHECK(check_b_compat(mc, l, u, &red).maxCoeff() <= 1e-10);
        }
      }
  }
}

TEST_CASE("Edge3D curl preservation") {
  std::mt19937 rng(15);
  for (const Element &e : {tetrahedron(), cube()}) {
    MomentCache mc(e);
    for (const FamilySpec &f : {FamilySpec::n1like(1), FamilySpec::n1like(2), FamilySpec::n2like(2)}) {
      const DofLayout l = build_layout(f, e);
      const SpaceBasis s = default_s_basis(f, mc);
      const MatrixXd D = dof_matrix(mc, l, s);
      const SerendipityReduction red = build_reduction(l, D, choose_dofs(mc, l, D, Strategy::Systematic));
      for (int t = 0; t < 4; ++t) {
        const PolyVector u = random_vector(rng, 3, f.beta + 2);
        CAPTURE(f.str());
        CHECK(check_curl_preserving(mc, l, u).maxCoeff() <= 1e-10);
        CHECK(check_curl_preserving(mc, l, u, &red).maxCoeff() <= 1e-10);
      }
    }
  }
  const Element e = unit_square();
  MomentCache mc(e);
  CHECK_THROWS_AS(check_curl_preserving(mc, build_layout(FamilySpec::edge2d(1, 0, 0), e), PolyVector(2, 1)),
                  ValidationError);
}

TEST_CASE("div and rot rows") {
  std::mt19937 rng(16);
  const Element e = regular_polygon(7);
  MomentCache mc(e);
  for (const FamilySpec &f : {FamilySpec::face2d(3, 2, 1), FamilySpec::edge2d(3, 1, 2)}) {
    const DofLayout l = build_layout(f, e);
    const int deg = f.family == Family::Edge2D ? f.kr : f.kd;
    // Fields in the space: degree <= k with div and rot of degree <= deg.
    const PolyVector v = random_vector(rng, 2, deg + 1);
    const PolyScalar q = random_scalar(rng, 2, deg);
    const PolyScalar dv = f.family == Family::Edge2D ? rot2(v, e.h()) : div(v, e.h());
    const double exact = integrate_element(e, dv * q);
    CHECK(std::abs(div_moment_row(mc, l, q).dot(interpolate(mc, l, v)) - exact) < 1e-10 * std::max(1.0, std::abs(exact)));
    CHECK_THROWS_AS(div_moment_row(mc, l, random_scalar(rng, 2, deg + 1)), ValidationError);
  }
}
