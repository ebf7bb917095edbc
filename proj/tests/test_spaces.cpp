#include "doctest.h"
#include "test_util.hpp"

#include "vemser/linalg.hpp"
#include "vemser/spaces.hpp"

using namespace vemser;

namespace {

MatrixXd concat(const SpaceBasis &a, const SpaceBasis &b, int n) {
  MatrixXd ma = a.matrix(n), mb = b.matrix(n);
  MatrixXd m(ma.rows(), ma.cols() + mb.cols());
  m << ma, mb;
  return m;
}

} // namespace

TEST_CASE("space dimensions by enumeration") {
  CHECK(build_basis(SpaceName::RTk, 1, 2).size() == 8);
  CHECK(build_basis(SpaceName::N1k, 0, 3).size() == 6);
  CHECK(build_basis(SpaceName::N1k, 1, 3).size() == 20);
  CHECK(build_basis(SpaceName::RTk, 0, 3).size() == 4);
  CHECK(build_basis(SpaceName::BDMk, 2, 2).size() == 12);
  for (int d = 2; d <= 3; ++d)
    for (int k = 0; k <= 4; ++k) {
      std::vector<SpaceName> names = {SpaceName::PkVec, SpaceName::RTk, SpaceName::N1k, SpaceName::N2k,
                                      SpaceName::XPk, SpaceName::GradPk};
      if (d == 2) names.insert(names.end(), {SpaceName::XPerpPk, SpaceName::BrotPk});
      if (d == 3) names.insert(names.end(), {SpaceName::XWedgePk, SpaceName::CurlPk});
      for (auto n : names) {
        const SpaceBasis b = build_basis(n, k, d);
        CHECK(b.size() == space_dim(n, k, d));
        CHECK(b.slices.front() == 0);
        CHECK(b.slices.back() == b.size());
        if (b.size() > 0) {
          MatrixXd m = b.matrix();
          for (int j = 0; j < m.cols(); ++j) m.col(j).normalize();
          const VectorXd s = singular_values(m);
          CHECK(s(s.size() - 1) > 1e-10 * s(0));
        }
      }
    }
}

TEST_CASE("three-dimensional dimension identity for k <= 6") {
  for (int k = 1; k <= 6; ++k) {
    CHECK(3 * poly_dim(k, 3) == (poly_dim(k + 1, 3) - 1) + (3 * poly_dim(k - 1, 3) - poly_dim(k - 2, 3)));
    if (k <= 4) {
      CHECK(build_basis(SpaceName::GradPk, k + 1, 3).size() == poly_dim(k + 1, 3) - 1);
      CHECK(build_basis(SpaceName::XWedgePk, k - 1, 3).size() == 3 * poly_dim(k - 1, 3) - poly_dim(k - 2, 3));
    }
  }
}

TEST_CASE("direct-sum decompositions of (P_k)^d") {
  for (int k = 1; k <= 4; ++k) {
    // 2D: grad P_{k+1} + x^perp P_{k-1}, brot P_{k+1} + x P_{k-1}
    {
      auto g = build_basis(SpaceName::GradPk, k + 1, 2), xp = build_basis(SpaceName::XPerpPk, k - 1, 2);
      auto r = build_basis(SpaceName::BrotPk, k + 1, 2), x = build_basis(SpaceName::XPk, k - 1, 2);
      CHECK(g.size() + xp.size() == 2 * poly_dim(k, 2));
      CHECK(numerical_rank(concat(g, xp, k)) == 2 * poly_dim(k, 2));
      CHECK(r.size() + x.size() == 2 * poly_dim(k, 2));
      CHECK(numerical_rank(concat(r, x, k)) == 2 * poly_dim(k, 2));
    }
    // 3D: curl (P_{k+1})^3 + x P_{k-1}, grad P_{k+1} + x ^ (P_{k-1})^3
    {
      auto c = build_basis(SpaceName::CurlPk, k + 1, 3), x = build_basis(SpaceName::XPk, k - 1, 3);
      auto g = build_basis(SpaceName::GradPk, k + 1, 3), w = build_basis(SpaceName::XWedgePk, k - 1, 3);
      CHECK(c.size() + x.size() == 3 * poly_dim(k, 3));
      CHECK(numerical_rank(concat(c, x, k)) == 3 * poly_dim(k, 3));
      CHECK(g.size() + w.size() == 3 * poly_dim(k, 3));
      CHECK(numerical_rank(concat(g, w, k)) == 3 * poly_dim(k, 3));
    }
  }
}

TEST_CASE("homogeneous slices of x-multiplied spaces are nested prefixes") {
  const SpaceBasis b = build_basis(SpaceName::XWedgePk, 3, 3);
  REQUIRE(b.slices.size() == 5);
  for (int s = 0; s <= 3; ++s) CHECK(b.prefix_size(s + 1) == 3 * poly_dim(s, 3) - poly_dim(s - 1, 3));
}

TEST_CASE("basis construction errors") {
  CHECK_THROWS(build_basis(SpaceName::BDMk, 0, 2));
  CHECK_THROWS(build_basis(SpaceName::RTk, -1, 2));
  CHECK_THROWS(build_basis(SpaceName::XPerpPk, 1, 3));
  CHECK_THROWS(space_from_string("nope"));
  CHECK(space_from_string("RTk") == SpaceName::RTk);
}
