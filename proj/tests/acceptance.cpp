// Acceptance run: one PASS/FAIL line per criterion. Exit status 1 if any fails.

#include "test_util.hpp"

#include "vemser/errors.hpp"
#include "vemser/linalg.hpp"
#include "vemser/projection.hpp"
#include "vemser/quadrature.hpp"
#include "vemser/report.hpp"
#include "vemser/serendipity.hpp"
#include "vemser/spaces.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace vemser;
using namespace testutil;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string first_failure;

  void expect(bool ok, const std::string &what) {
    if (!ok && pass) first_failure = what;
    pass = pass && ok;
  }
};

struct Named {
  std::string name;
  Element e;
};

std::vector<Named> convex_polygons() {
  return {{"triangle", ref_triangle()},
          {"square", unit_square()},
          {"pentagon", regular_polygon(5)},
          {"hexagon", regular_polygon(6)}};
}

std::vector<Named> test_elements_2d() {
  auto v = convex_polygons();
  v.push_back({"lshape", l_shape()});
  v.push_back({"dart", dart()});
  return v;
}

std::vector<Named> test_elements_3d() { return {{"tetrahedron", tetrahedron()}, {"cube", cube()}}; }

std::vector<std::pair<std::string, FamilySpec>> families(int dim, int k) {
  if (dim == 2)
    return {{"face2d bdm", FamilySpec::face2d(k, k - 1, k - 1)},
            {"face2d rt", FamilySpec::face2d(k, k, k - 1)},
            {"edge2d n2", FamilySpec::edge2d(k, k - 1, k - 1)},
            {"edge2d n1", FamilySpec::edge2d(k, k - 1, k)}};
  return {{"face3d bdm", FamilySpec::face3d(k, k - 1, k - 1)},
          {"face3d rt", FamilySpec::face3d(k, k, k - 1)},
          {"edge3d n2", FamilySpec::n2like(k)},
          {"edge3d n1", FamilySpec::n1like(k)}};
}

struct Setup {
  MomentCache mc;
  DofLayout layout;
  SpaceBasis s;
  MatrixXd D;
  Setup(const Element &e, const FamilySpec &spec) : mc(e), layout(build_layout(spec, e)) {
    s = default_s_basis(spec, mc);
    D = dof_matrix(mc, layout, s);
  }
  SerendipityReduction reduce(Strategy st) const {
    return build_reduction(layout, D, choose_dofs(mc, layout, D, st));
  }
};

std::string label(const Named &n, const std::string &fam, int k) { return n.name + " " + fam + " k=" + std::to_string(k); }

int ds_rank(const Setup &c, const std::vector<int> &selected) {
  return numerical_rank(equilibrate_columns(c.D(Eigen::all, selected)));
}

PolyVector random_field(std::mt19937 &rng, int d, int deg) { return random_vector(rng, d, deg); }

// 1. Face2D kernels on convex polygons.
void criterion1(Outcome &o) {
  int cases = 0;
  for (const auto &n : convex_polygons()) {
    const int eta = eta_cover(n.e).eta;
    for (int k = 1; k <= 5; ++k) {
      const Setup c(n.e, FamilySpec::face2d(k, k - 1, k - 1));
      const int numeric = kernel_nullspace(c.D, c.layout.M, 1e-8).dim;
      const int predicted = poly_dim(k - eta + 1, 2);
      o.expect(numeric == predicted, label(n, "face2d", k) + ": dim Z " + std::to_string(numeric) + " vs " +
                                         std::to_string(predicted));
      ++cases;
    }
  }
  o.detail << cases << " cases";
}

// 2. Tetrahedron Face3D kernels and cups.
void criterion2(Outcome &o) {
  const Element t = tetrahedron();
  double worst = 0.0;
  o.detail << "dims";
  for (int k = 2; k <= 4; ++k) {
    const Setup c(t, FamilySpec::face3d(k, k - 1, k - 1));
    const KernelSpace z = kernel_nullspace(c.D, c.layout.M, 1e-8);
    const int formula = 3 * poly_dim(k - 2, 3) - poly_dim(k - 3, 3);
    o.expect(z.dim == formula, "tetrahedron k=" + std::to_string(k) + ": dim Z " + std::to_string(z.dim));
    const KernelSpace cups = tetra_cups(t, k, c.s);
    o.expect(cups.dim == z.dim, "cups dimension k=" + std::to_string(k));
    if (cups.dim == z.dim && z.dim > 0) {
      const double ang = principal_angles(c.s.matrix() * z.coeffs, c.s.matrix() * cups.coeffs).maxCoeff();
      worst = std::max(worst, ang);
      o.expect(ang < 1e-7, "principal angle k=" + std::to_string(k));
    }
    o.detail << " " << z.dim;
  }
  o.detail << ", max principal angle " << worst;
}

// 3. Cube Face3D kernels.
void criterion3(Outcome &o) {
  const int expect[] = {0, 0, 3};
  o.detail << "dims";
  for (int k = 1; k <= 3; ++k) {
    const Setup c(cube(), FamilySpec::face3d(k, k - 1, k - 1));
    const int dim = kernel_nullspace(c.D, c.layout.M, 1e-8).dim;
    o.expect(dim == expect[k - 1], "cube k=" + std::to_string(k) + ": dim Z " + std::to_string(dim));
    o.detail << " " << dim;
  }
}

// 4. Serendipity correctness.
void criterion4(Outcome &o) {
  std::vector<Named> elems = {{"triangle", ref_triangle()}, {"square", unit_square()}, {"hexagon", regular_polygon(6)}};
  for (auto &n : test_elements_3d()) elems.push_back(n);
  double worst = 0.0;
  int cases = 0;
  for (const auto &n : elems)
    for (int k = 1; k <= 4; ++k)
      for (const auto &[fam, spec] : families(n.e.dim(), k)) {
        const Setup c(n.e, spec);
        const SerendipityReduction r = c.reduce(default_strategy(n.e));
        const std::string tag = label(n, fam, k);
        o.expect(ds_rank(c, r.selected) == c.s.size(), tag + ": D_S rank");
        for (int i = 0; i < c.D.rows(); ++i) {
          const VectorXd d = c.D.row(i).transpose();
          const VectorXd back = r.E * d(r.selected);
          const double err = (back - d).norm() / std::max(1.0, d.norm());
          worst = std::max(worst, err);
          o.expect(err <= 1e-9, tag + ": S not contained in V_S");
        }
        o.expect(numerical_rank(r.E, 1e-12) == r.S, tag + ": dim V_S");
        if (n.name == "triangle" && fam == "face2d bdm")
          o.expect(r.S == 2 * poly_dim(k, 2), tag + ": S = " + std::to_string(r.S));
        ++cases;
      }
  o.detail << cases << " cases, max containment residual " << worst;
}

// 5. Projection reproduction.
void criterion5(Outcome &o) {
  std::mt19937 rng(5);
  double worst = 0.0;
  int cases = 0;
  auto run = [&](const Named &n, int kmax) {
    for (int k = 1; k <= kmax; ++k)
      for (const auto &[fam, spec] : families(n.e.dim(), k)) {
        const Setup c(n.e, spec);
        const int smax = s_max(spec);
        for (int s = 0; s <= smax; ++s) {
          if (!polynomials_in_space(spec, s)) continue;
          const MatrixXd pi = l2_projector(c.mc, c.layout, s);
          const MatrixXd g = vector_mass_matrix(c.mc, s);
          for (int t = 0; t < 50; ++t) {
            const PolyVector p = random_field(rng, n.e.dim(), s);
            const VectorXd pf = p.flatten(s), dq = pi * interpolate(c.mc, c.layout, p) - pf;
            const double err = std::sqrt(std::max(0.0, dq.dot(g * dq)) / pf.dot(g * pf));
            worst = std::max(worst, err);
            o.expect(err <= 1e-9, label(n, fam, k) + " s=" + std::to_string(s));
          }
          ++cases;
        }
        bool rejected = false;
        try {
          moment_map(c.mc, c.layout, smax + 1);
        } catch (const ValidationError &) {
          rejected = true;
        }
        o.expect(rejected, label(n, fam, k) + ": s_max+1 accepted");
      }
  };
  for (const auto &n : test_elements_2d()) run(n, 4);
  for (const auto &n : test_elements_3d()) run(n, 4);
  o.detail << cases << " (element, family, k, s) cases x 50, max relative L2 error " << worst;
}

// 6. B-compatibility and curl preservation.
void criterion6(Outcome &o) {
  std::mt19937 rng(6);
  double worst_full = 0.0, worst_red = 0.0;
  auto run = [&](const Named &n, int kmax) {
    for (int k = 1; k <= kmax; ++k)
      for (const auto &[fam, spec] : families(n.e.dim(), k)) {
        const Setup c(n.e, spec);
        const SerendipityReduction r = c.reduce(default_strategy(n.e));
        const bool edge3d = spec.family == Family::Edge3D;
        std::vector<PolyVector> us;
        for (int t = 0; t < 100; ++t) us.push_back(random_field(rng, n.e.dim(), k + 2));
        const double full = (edge3d ? check_curl_preserving(c.mc, c.layout, us)
                                    : check_b_compat(c.mc, c.layout, us)).maxCoeff();
        const double red = (edge3d ? check_curl_preserving(c.mc, c.layout, us, &r)
                                   : check_b_compat(c.mc, c.layout, us, &r)).maxCoeff();
        worst_full = std::max(worst_full, full);
        worst_red = std::max(worst_red, red);
        o.expect(full <= 1e-10 && red <= 1e-10, label(n, fam, k));
      }
  };
  for (const auto &n : test_elements_2d()) run(n, 4);
  for (const auto &n : test_elements_3d()) run(n, 4);
  o.detail << "max residual full " << worst_full << ", reduced " << worst_red;
}

MatrixXd concat(const SpaceBasis &a, const SpaceBasis &b, int n) {
  MatrixXd ma = a.matrix(n), mb = b.matrix(n);
  MatrixXd m(ma.rows(), ma.cols() + mb.cols());
  m << ma, mb;
  return m;
}

// 7. Decompositions, dimension identities, divergence theorem.
void criterion7(Outcome &o) {
  for (int k = 1; k <= 4; ++k) {
    const std::string ks = " k=" + std::to_string(k);
    auto check = [&](SpaceName a, SpaceName b, int d, const std::string &what) {
      const SpaceBasis ba = build_basis(a, k + 1, d), bb = build_basis(b, k - 1, d);
      const int n = d * poly_dim(k, d);
      o.expect(ba.size() + bb.size() == n && numerical_rank(concat(ba, bb, k)) == n, what + ks);
    };
    check(SpaceName::GradPk, SpaceName::XPerpPk, 2, "grad + xperp");
    check(SpaceName::BrotPk, SpaceName::XPk, 2, "brot + x");
    check(SpaceName::CurlPk, SpaceName::XPk, 3, "curl + x");
    check(SpaceName::GradPk, SpaceName::XWedgePk, 3, "grad + xwedge");
  }
  for (int k = 1; k <= 6; ++k) {
    const std::string ks = " k=" + std::to_string(k);
    o.expect(2 * poly_dim(k, 2) == (poly_dim(k + 1, 2) - 1) + poly_dim(k - 1, 2), "2D identity" + ks);
    o.expect(3 * poly_dim(k, 3) == (poly_dim(k + 1, 3) - 1) + (3 * poly_dim(k - 1, 3) - poly_dim(k - 2, 3)),
             "3D gradient identity" + ks);
    o.expect(3 * poly_dim(k, 3) == (3 * poly_dim(k + 1, 3) - poly_dim(k + 2, 3) + 1) + poly_dim(k - 1, 3),
             "3D curl identity" + ks);
    o.expect(build_basis(SpaceName::CurlPk, k + 1, 3).size() == 3 * poly_dim(k + 1, 3) - poly_dim(k + 2, 3) + 1,
             "curl enumeration" + ks);
    o.expect(build_basis(SpaceName::XWedgePk, k - 1, 3).size() == 3 * poly_dim(k - 1, 3) - poly_dim(k - 2, 3),
             "xwedge enumeration" + ks);
  }
  std::mt19937 rng(7);
  double worst = 0.0;
  for (const auto &n : test_elements_2d())
    for (int deg = 1; deg <= 8; ++deg) {
      const PolyVector v = random_field(rng, 2, deg);
      const double lhs = integrate_element(n.e, div(v, n.e.h()));
      double rhs = 0;
      for (int i = 0; i < n.e.num_facets(); ++i)
        rhs += integrate_edge(n.e, i, dot(v, VectorXd(n.e.polygon().edges()[i].normal)));
      worst = std::max(worst, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs)));
    }
  for (const auto &n : test_elements_3d())
    for (int deg = 1; deg <= 8; ++deg) {
      const PolyVector v = random_field(rng, 3, deg);
      const double lhs = integrate_element(n.e, div(v, n.e.h()));
      double rhs = 0;
      for (int f = 0; f < n.e.num_facets(); ++f)
        rhs += integrate_face(n.e, f, dot(v, VectorXd(n.e.polyhedron().faces()[f].frame.n)));
      worst = std::max(worst, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs)));
    }
  o.expect(worst <= 1e-10, "divergence theorem");
  o.detail << "4 decompositions k<=4, identities k<=6, divergence theorem residual " << worst;
}

int fem_dim(const std::vector<FemRow> &rows, const std::string &name) {
  for (const auto &r : rows)
    if (r.name == name) return r.dim;
  return -1;
}

// 8. VEM vs FEM dimension ordering.
void criterion8(Outcome &o) {
  const Element tri = ref_triangle(), sq = unit_square();
  o.detail << "N/FEM";
  for (int k = 1; k <= 4; ++k) {
    const std::string ks = std::to_string(k);
    // Each family against the classical space of the same type.
    const std::pair<std::string, std::string> pairs[] = {
        {"face2d bdm", "BDM_"}, {"face2d rt", "RT_"}, {"edge2d n2", "N2_"}, {"edge2d n1", "N1_"}};
    for (const auto &[fam, spec] : families(2, k))
      for (const auto &[f, fem] : pairs)
        if (f == fam) {
          const int n = build_layout(spec, tri).N(), q = fem_dim(fem_comparison(tri, spec), fem + ks);
          o.expect(q > 0 && n >= q, "triangle " + fam + " k=" + ks + " vs " + fem + ks);
        }
    const FamilySpec rt = FamilySpec::face2d(k, k, k - 1);
    const int n = build_layout(rt, sq).N(), q = fem_dim(fem_comparison(sq, rt), "RT^q_" + ks);
    o.expect(q > 0 && n < q, "square k=" + ks + ": " + std::to_string(n) + " vs RT^q " + std::to_string(q));
    const int bdm = build_layout(FamilySpec::face2d(k, k - 1, k - 1), sq).N();
    o.expect(bdm < q, "square bdm k=" + ks);
    o.detail << " square k=" << k << ": " << bdm << "," << n << "<" << q;
  }
}

// 9. Strategy ordering and Systematic full rank.
void criterion9(Outcome &o) {
  std::vector<Named> convex = convex_polygons(), all = test_elements_2d();
  for (auto &n : test_elements_3d()) {
    convex.push_back(n);
    all.push_back(n);
  }
  int cases = 0;
  for (const auto &n : all)
    for (int k = 1; k <= 3; ++k)
      for (const auto &[fam, spec] : families(n.e.dim(), k)) {
        const Setup c(n.e, spec);
        const std::string tag = label(n, fam, k);
        const Selection sys = choose_dofs(c.mc, c.layout, c.D, Strategy::Systematic);
        o.expect(ds_rank(c, sys.selected) == c.s.size(), tag + ": systematic rank");
        if (n.e.is_convex()) {
          const auto size = [&](Strategy st) {
            return static_cast<int>(choose_dofs(c.mc, c.layout, c.D, st).selected.size());
          };
          const int st = size(Strategy::Stingy), cv = size(Strategy::ConvexEta), lz = size(Strategy::Lazy);
          o.expect(st <= cv && cv <= lz && lz <= c.layout.N(), tag + ": ordering");
        }
        ++cases;
      }
  o.detail << cases << " cases including lshape and dart";
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome &)>>> criteria = {
      {"kernel dimensions on convex polygons", criterion1},
      {"tetrahedron kernels and cups", criterion2},
      {"cube kernels", criterion3},
      {"serendipity correctness", criterion4},
      {"projection reproduction", criterion5},
      {"B-compatibility and curl preservation", criterion6},
      {"polynomial algebra", criterion7},
      {"DOF count ordering", criterion8},
      {"strategy ordering", criterion9}};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception &err) {
      o.expect(false, std::string("exception: ") + err.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu %s: %s (%s; %.1f s)%s%s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.str().c_str(), secs, o.pass ? "" : " first failure: ", o.first_failure.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
