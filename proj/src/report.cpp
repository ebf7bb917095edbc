#include "vemser/report.hpp"

#include "vemser/element_io.hpp"
#include "vemser/errors.hpp"
#include "vemser/linalg.hpp"
#include "vemser/projection.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>

namespace vemser {

namespace {

using nlohmann::json;

std::string fmt(double x, int prec = 3) {
  std::ostringstream os;
  os << std::setprecision(prec) << std::scientific << x;
  return os.str();
}

int enumerated_dim(const std::vector<PolyVector> &members) {
  if (members.empty()) return 0;
  int n = 0;
  for (const auto &m : members) n = std::max(n, m.degree());
  MatrixXd a(members[0].dim() * poly_dim(n, members[0].dim()), members.size());
  for (std::size_t j = 0; j < members.size(); ++j) a.col(j) = members[j].flatten(n);
  return numerical_rank(a, 1e-12);
}

int named_dim(SpaceName name, int k, int d) { return enumerated_dim(build_basis(name, k, d).members); }

// Q_{a_1,...,a_d} in component c: monomials with x_i-degree <= bounds[c][i].
int tensor_dim(int d, const std::vector<std::array<int, 3>> &bounds) {
  std::vector<PolyVector> members;
  int n = 0;
  for (const auto &b : bounds) n = std::max(n, b[0] + b[1] + b[2]);
  for (int c = 0; c < d; ++c)
    for (const auto &ex : monomials(d, n)) {
      bool ok = true;
      for (int i = 0; i < d; ++i) ok = ok && ex[i] <= bounds[c][i];
      if (ok) members.push_back(PolyVector::unit(c, PolyScalar::monomial(d, ex)).padded(n));
    }
  return enumerated_dim(members);
}

// (P_k)^2 plus the two curls of x^{k+1} y and x y^{k+1}.
int bdm_quad_dim(int k) {
  std::vector<PolyVector> members = build_basis(SpaceName::PkVec, k, 2).members;
  members.push_back(brot2(PolyScalar::monomial(2, {k + 1, 1, 0})));
  members.push_back(brot2(PolyScalar::monomial(2, {1, k + 1, 0})));
  const int n = k + 1;
  for (auto &m : members) m = m.padded(n);
  return enumerated_dim(members);
}

struct Context {
  const Element &e;
  const RunConfig &cfg;
  MomentCache mc;
  DofLayout layout;
  SpaceBasis s;
  MatrixXd D;

  Context(const Element &el, const RunConfig &c) : e(el), cfg(c), mc(el), layout(build_layout(c.spec, el)) {
    s = run_s_basis(c, mc);
    D = dof_matrix(mc, layout, s, true, c.opt.rank_tol);
  }

  Strategy strategy() const { return cfg.strategy ? *cfg.strategy : default_strategy(e); }
};

json header(const std::string &cmd, const std::string &label, const Context &c) {
  return {{"command", cmd},
          {"element", label},
          {"geometry", element_summary(c.e, c.cfg.opt.cover)},
          {"family", to_string(c.cfg.spec.family)},
          {"params", c.cfg.spec.params_json()},
          {"s_space", to_string(c.s.name)},
          {"dim_s", c.s.size()}};
}

std::optional<int> kernel_formula(const Context &c, int eta) {
  const auto f = c.cfg.spec.family;
  if (!c.e.is_convex()) return std::nullopt;
  if (c.s.name != default_s_space(c.cfg.spec)) return std::nullopt;
  try {
    const bool tet = c.e.dim() == 3 && c.e.polyhedron().is_tetrahedron();
    if (f == Family::Face3D && !tet) return std::nullopt;
    if (f == Family::Edge3D) return std::nullopt;
    return zdim_formula(f, c.cfg.spec.degree(), eta, tet);
  } catch (const ValidationError &) {
    return std::nullopt;
  }
}

struct Invariants {
  json items = json::object();
  bool ok = true;
  void add(const std::string &name, bool pass, const json &value) {
    items[name] = {{"pass", pass}, {"value", value}};
    ok = ok && pass;
  }
};

// Selected rows of the S basis DOFs extend to the full vectors.
double containment_error(const MatrixXd &D, const SerendipityReduction &r) {
  double err = 0.0;
  for (int i = 0; i < D.rows(); ++i) {
    const VectorXd d = D.row(i).transpose();
    VectorXd ds(r.S);
    for (int j = 0; j < r.S; ++j) ds(j) = d(r.selected[j]);
    err = std::max(err, (r.E * ds - d).norm() / std::max(1.0, d.norm()));
  }
  return err;
}

void reduction_invariants(const Context &c, const SerendipityReduction &r, Invariants &inv) {
  MatrixXd ds(c.D.rows(), r.S);
  for (int j = 0; j < r.S; ++j) ds.col(j) = c.D.col(r.selected[j]);
  const int rank = numerical_rank(equilibrate_columns(ds), c.cfg.opt.rank_tol);
  inv.add("ds_full_row_rank", rank == r.dim_s, rank);
  const double cont = containment_error(c.D, r);
  inv.add("s_contained_in_vs", cont <= 1e-9, cont);
  const int erank = numerical_rank(r.E, 1e-12);
  inv.add("dim_vs_equals_S", erank == r.S, erank);
  bool kept = true;
  for (int i = 0; i < c.layout.M; ++i) {
    // Edge3D face x^tau moments sit in the kept block but are thinned per face.
    const auto &f = c.layout.dofs[i];
    if (f.type == DofType::XMoment && f.entity == Entity::Face) continue;
    kept = kept && std::binary_search(r.selected.begin(), r.selected.end(), i);
  }
  inv.add("kept_block_retained", kept, kept);
}

std::string params_text(const FamilySpec &f) { return f.str(); }

} // namespace

std::vector<FemRow> fem_comparison(const Element &e, const FamilySpec &spec) {
  const std::string kind = element_kind(e);
  const int k = spec.degree();
  std::vector<FemRow> rows;
  const auto fam = spec.family;
  const bool face = fam == Family::Face2D || fam == Family::Face3D;
  const std::string ks = std::to_string(k);
  if (kind == "triangle" || kind == "tetrahedron") {
    const int d = e.dim();
    if (face) {
      if (k >= 1) rows.push_back({"BDM_" + ks, named_dim(SpaceName::BDMk, k, d)});
      rows.push_back({"RT_" + ks, named_dim(SpaceName::RTk, k, d)});
    } else {
      if (k >= 1) rows.push_back({"N2_" + ks, named_dim(SpaceName::N2k, k, d)});
      rows.push_back({"N1_" + ks, named_dim(SpaceName::N1k, k, d)});
    }
  } else if (kind == "quadrilateral" && e.is_convex()) {
    const int rt = tensor_dim(2, {{k + 1, k, 0}, {k, k + 1, 0}});
    rows.push_back({(face ? "RT^q_" : "N1^q_") + ks, rt});
    if (k >= 1) rows.push_back({(face ? "BDM^q_" : "N2^q_") + ks, bdm_quad_dim(k)});
  } else if (kind == "hexahedron" && e.is_convex()) {
    if (face)
      rows.push_back({"RT^q_" + ks, tensor_dim(3, {{k + 1, k, k}, {k, k + 1, k}, {k, k, k + 1}})});
    else
      rows.push_back({"N1^q_" + ks, tensor_dim(3, {{k, k + 1, k + 1}, {k + 1, k, k + 1}, {k + 1, k + 1, k}})});
  }
  return rows;
}

SpaceBasis run_s_basis(const RunConfig &cfg, const MomentCache &mc) {
  if (!cfg.s_space) return default_s_basis(cfg.spec, mc);
  const SpaceName n = *cfg.s_space;
  if (n == SpaceName::BDMk && cfg.spec.degree() < 1) throw ValidationError("BDM needs degree >= 1");
  return orthonormal_basis(build_basis(n, cfg.spec.degree(), cfg.spec.dim()), mc);
}

std::string format_table(const std::vector<std::vector<std::string>> &rows) {
  std::vector<std::size_t> w;
  for (const auto &r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (w.size() <= i) w.push_back(0);
      w[i] = std::max(w[i], r[i].size());
    }
  std::ostringstream os;
  for (const auto &r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += r[i];
      if (i + 1 < r.size()) line += std::string(w[i] - r[i].size() + 2, ' ');
    }
    os << line << "\n";
  }
  return os.str();
}

Report cmd_dims(const Element &e, const std::string &label, const RunConfig &cfg) {
  const DofLayout l = build_layout(cfg.spec, e);
  const std::vector<FemRow> fem = fem_comparison(e, cfg.spec);
  Report r;
  r.json = {{"command", "dims"},
            {"element", label},
            {"geometry", element_summary(e, cfg.opt.cover)},
            {"family", to_string(cfg.spec.family)},
            {"params", cfg.spec.params_json()},
            {"N", l.N()},
            {"M", l.M}};
  json rows = json::array();
  std::vector<std::vector<std::string>> table = {{"element", "family", "params", "space", "dim"},
                                                 {label, to_string(cfg.spec.family), params_text(cfg.spec), "VEM N",
                                                  std::to_string(l.N())},
                                                 {"", "", "", "VEM M (kept)", std::to_string(l.M)}};
  for (const auto &f : fem) {
    const std::string rel = l.N() < f.dim ? "<" : l.N() == f.dim ? "=" : ">";
    rows.push_back({{"name", f.name}, {"dim", f.dim}, {"vem_vs_fem", rel}});
    table.push_back({"", "", "", f.name, std::to_string(f.dim)});
  }
  r.json["fem"] = rows;
  r.text = format_table(table);
  return r;
}

Report cmd_reduce(const Element &e, const std::string &label, const RunConfig &cfg) {
  const Context c(e, cfg);
  const Strategy st = c.strategy();
  const Selection sel = choose_dofs(c.mc, c.layout, c.D, st, cfg.opt);
  const SerendipityReduction red = build_reduction(c.layout, c.D, sel, VectorXd(), cfg.opt);
  const KernelSpace z = kernel_nullspace(c.D, c.layout.M, cfg.opt.rank_tol);
  const auto formula = kernel_formula(c, sel.eta);

  Report r;
  r.json = header("reduce", label, c);
  r.json["N"] = red.N;
  r.json["M"] = red.M;
  r.json["S"] = red.S;
  r.json["strategy"] = to_string(red.strategy);
  r.json["eta"] = red.eta;
  r.json["singular_values"] = std::vector<double>(red.singular_values.data(),
                                                  red.singular_values.data() + red.singular_values.size());
  r.json["saved_dofs"] = red.N - red.S;
  r.json["kernel_dim_formula"] = formula ? json(*formula) : json(nullptr);
  r.json["kernel_dim_numeric"] = z.dim;
  r.json["condition"] = red.condition;
  json extra = json::array();
  for (int i : red.extra) {
    json d = c.layout.dofs[i].to_json();
    d["layout_index"] = i;
    extra.push_back(d);
  }
  r.json["extra_dofs"] = extra;
  r.json["warnings"] = red.warnings;
  r.json["notes"] = sel.notes;

  Invariants inv;
  reduction_invariants(c, red, inv);
  if (formula) inv.add("kernel_dim_matches_formula", *formula == z.dim, z.dim);
  r.json["invariants"] = inv.items;
  r.status = inv.ok ? kExitOk : kExitInvariant;
  r.json["status"] = inv.ok ? "pass" : "fail";

  std::vector<std::vector<std::string>> table = {
      {"element", "family", "params", "strategy", "eta", "N", "M", "S", "saved", "dimZ", "dimZ formula", "status"},
      {label, to_string(cfg.spec.family), params_text(cfg.spec), to_string(red.strategy), std::to_string(red.eta),
       std::to_string(red.N), std::to_string(red.M), std::to_string(red.S), std::to_string(red.N - red.S),
       std::to_string(z.dim), formula ? std::to_string(*formula) : "-", inv.ok ? "pass" : "FAIL"}};
  r.text = format_table(table);
  for (const auto &w : red.warnings) r.text += "warning: " + w + "\n";
  for (auto it = inv.items.begin(); it != inv.items.end(); ++it)
    if (!it.value()["pass"].get<bool>()) r.text += "failed invariant: " + it.key() + "\n";
  return r;
}

Report cmd_verify(const Element &e, const std::string &label, const RunConfig &cfg) {
  const Context c(e, cfg);
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto random_field = [&](int deg) {
    const int d = e.dim();
    std::vector<PolyScalar> comps;
    for (int i = 0; i < d; ++i) {
      PolyScalar p(d, deg);
      for (int j = 0; j < p.coeffs().size(); ++j) p.coeffs()(j) = unif(rng);
      comps.push_back(p);
    }
    return PolyVector(comps);
  };

  Invariants inv;
  inv.add("dof_matrix_full_rank", true, c.D.rows());

  const Strategy st = c.strategy();
  const SerendipityReduction red =
      build_reduction(c.layout, c.D, choose_dofs(c.mc, c.layout, c.D, st, cfg.opt), VectorXd(), cfg.opt);
  reduction_invariants(c, red, inv);

  const KernelSpace z = kernel_nullspace(c.D, c.layout.M, cfg.opt.rank_tol);
  const auto formula = kernel_formula(c, red.eta);
  if (formula) inv.add("kernel_dim_matches_formula", *formula == z.dim, z.dim);

  // Projection reproduction on every degree the DOFs can reach.
  const int smax = s_max(cfg.spec);
  double proj = 0.0;
  int degrees = 0;
  for (int s = 0; s <= smax; ++s) {
    if (!polynomials_in_space(cfg.spec, s)) continue;
    ++degrees;
    const MatrixXd pi = l2_projector(c.mc, c.layout, s);
    const MatrixXd g = vector_mass_matrix(c.mc, s);
    for (int t = 0; t < cfg.samples; ++t) {
      const PolyVector p = random_field(s);
      const VectorXd pf = p.flatten(s), dq = pi * interpolate(c.mc, c.layout, p) - pf;
      proj = std::max(proj, std::sqrt(std::max(0.0, dq.dot(g * dq)) / pf.dot(g * pf)));
    }
  }
  inv.add("projection_reproduction", proj <= 1e-9, {{"max_l2_error", proj}, {"degrees", degrees}, {"s_max", smax}});
  bool threshold = false;
  try {
    moment_map(c.mc, c.layout, smax + 1);
  } catch (const ValidationError &) {
    threshold = true;
  }
  inv.add("threshold_rejected", threshold, smax + 1);

  const int deg = cfg.spec.degree() + 2;
  double full = 0.0, reduced = 0.0;
  const bool edge3d = cfg.spec.family == Family::Edge3D;
  std::vector<PolyVector> us;
  for (int t = 0; t < cfg.samples; ++t) us.push_back(random_field(deg));
  auto worst = [](const MatrixXd &m) { return m.size() ? m.maxCoeff() : 0.0; };
  full = worst(edge3d ? check_curl_preserving(c.mc, c.layout, us) : check_b_compat(c.mc, c.layout, us));
  reduced = worst(edge3d ? check_curl_preserving(c.mc, c.layout, us, &red) : check_b_compat(c.mc, c.layout, us, &red));
  const std::string tag = edge3d ? "curl_preserving" : "b_compat";
  inv.add(tag + "_full", full <= 1e-10, full);
  inv.add(tag + "_reduced", reduced <= 1e-10, reduced);

  if (e.is_convex()) {
    std::map<std::string, int> sizes;
    for (Strategy s : {Strategy::Stingy, Strategy::ConvexEta, Strategy::Lazy, Strategy::Systematic})
      sizes[to_string(s)] = static_cast<int>(choose_dofs(c.mc, c.layout, c.D, s, cfg.opt).selected.size());
    const bool ordered = sizes["stingy"] <= sizes["convex"] && sizes["convex"] <= sizes["lazy"] &&
                         sizes["lazy"] <= c.layout.N();
    inv.add("strategy_ordering", ordered, sizes);
  }

  Report r;
  r.json = header("verify", label, c);
  r.json["seed"] = cfg.seed;
  r.json["samples"] = cfg.samples;
  r.json["strategy"] = to_string(st);
  r.json["checks"] = inv.items;
  r.json["status"] = inv.ok ? "pass" : "fail";
  r.status = inv.ok ? kExitOk : kExitInvariant;

  std::vector<std::vector<std::string>> table = {{"check", "result", "value"}};
  for (auto it = inv.items.begin(); it != inv.items.end(); ++it) {
    const json &v = it.value()["value"];
    std::string val = v.is_number_float() ? fmt(v.get<double>()) : v.dump();
    table.push_back({it.key(), it.value()["pass"].get<bool>() ? "pass" : "FAIL", val});
  }
  r.text = label + "  " + to_string(cfg.spec.family) + " " + params_text(cfg.spec) + "  seed " +
           std::to_string(cfg.seed) + "\n" + format_table(table);
  return r;
}

Report cmd_zspace(const Element &e, const std::string &label, const RunConfig &cfg) {
  const Context c(e, cfg);
  const KernelSpace z = kernel_nullspace(c.D, c.layout.M, c.s, cfg.opt.rank_tol);
  const int eta = eta_cover(e, cfg.opt.cover).eta;
  const auto formula = kernel_formula(c, eta);

  Report r;
  r.json = header("zspace", label, c);
  r.json["eta"] = eta;
  r.json["kernel_dim_numeric"] = z.dim;
  r.json["kernel_dim_formula"] = formula ? json(*formula) : json(nullptr);
  json fields = json::array();
  for (const auto &f : z.fields) {
    PolyVector t = f;
    double big = 0.0;
    for (int i = 0; i < t.dim(); ++i) big = std::max(big, t[i].coeffs().cwiseAbs().maxCoeff());
    for (int i = 0; i < t.dim(); ++i)
      for (int j = 0; j < t[i].coeffs().size(); ++j)
        if (std::abs(t[i].coeffs()(j)) <= 1e-10 * big) t[i].coeffs()(j) = 0.0;
    t = t.trimmed();
    json comps = json::array();
    for (int i = 0; i < t.dim(); ++i) comps.push_back(t[i].str(8));
    fields.push_back(comps);
  }
  r.json["fields"] = fields;

  std::vector<std::vector<std::string>> table = {
      {"element", "family", "params", "eta", "dimZ", "formula"},
      {label, to_string(cfg.spec.family), params_text(cfg.spec), std::to_string(eta), std::to_string(z.dim),
       formula ? std::to_string(*formula) : "-"}};
  if (cfg.spec.family == Family::Face3D && e.dim() == 3 && e.polyhedron().is_tetrahedron()) {
    const KernelSpace cups = tetra_cups(e, cfg.spec.k, c.s);
    double angle = 0.0;
    if (cups.dim > 0 && z.dim > 0) angle = principal_angles(cups.coeffs, z.coeffs).maxCoeff();
    const bool same = cups.dim == z.dim && angle < 1e-7;
    r.json["cups"] = {{"dim", cups.dim}, {"max_principal_angle", angle}, {"same_span", same}};
    table[0].push_back("cups");
    table[1].push_back(std::to_string(cups.dim) + (same ? " (same span)" : " (differs)"));
    if (!same) r.status = kExitInvariant;
  }
  if (formula && *formula != z.dim) r.status = kExitInvariant;
  r.json["status"] = r.status == kExitOk ? "pass" : "fail";
  r.text = format_table(table);
  int i = 0;
  for (const auto &f : fields) {
    r.text += "  z" + std::to_string(i++) + " = (";
    for (std::size_t k = 0; k < f.size(); ++k) r.text += (k ? ", " : "") + f[k].get<std::string>();
    r.text += ")\n";
  }
  return r;
}

} // namespace vemser
