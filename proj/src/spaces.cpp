#include "vemser/spaces.hpp"

#include "vemser/errors.hpp"
#include "vemser/linalg.hpp"

#include <functional>
#include <map>

namespace vemser {

std::string to_string(SpaceName n) {
  switch (n) {
  case SpaceName::PkVec: return "Pk_vec";
  case SpaceName::RTk: return "RTk";
  case SpaceName::BDMk: return "BDMk";
  case SpaceName::N1k: return "N1k";
  case SpaceName::N2k: return "N2k";
  case SpaceName::XPk: return "xPk";
  case SpaceName::XPerpPk: return "xPerpPk";
  case SpaceName::XWedgePk: return "xWedgePk";
  case SpaceName::GradPk: return "gradPk";
  case SpaceName::BrotPk: return "brotPk";
  case SpaceName::CurlPk: return "curlPk";
  case SpaceName::Custom: return "custom";
  }
  return "custom";
}

SpaceName space_from_string(const std::string &s) {
  static const std::map<std::string, SpaceName> names = {
      {"Pk_vec", SpaceName::PkVec}, {"RTk", SpaceName::RTk},         {"BDMk", SpaceName::BDMk},
      {"N1k", SpaceName::N1k},      {"N2k", SpaceName::N2k},         {"xPk", SpaceName::XPk},
      {"xPerpPk", SpaceName::XPerpPk}, {"xWedgePk", SpaceName::XWedgePk},
      {"gradPk", SpaceName::GradPk}, {"brotPk", SpaceName::BrotPk}, {"curlPk", SpaceName::CurlPk},
      {"custom", SpaceName::Custom},
      // short aliases
      {"pk", SpaceName::PkVec}, {"rt", SpaceName::RTk}, {"bdm", SpaceName::BDMk},
      {"n1", SpaceName::N1k}, {"n2", SpaceName::N2k}};
  auto it = names.find(s);
  if (it == names.end()) throw ValidationError("unknown space name '" + s + "'");
  return it->second;
}

int SpaceBasis::degree() const {
  int n = 0;
  for (const auto &m : members) n = std::max(n, m.degree());
  return n;
}

MatrixXd SpaceBasis::matrix(int n) const {
  if (n < 0) n = degree();
  const int len = d * poly_dim(n, d);
  MatrixXd m(len, size());
  for (int j = 0; j < size(); ++j) m.col(j) = members[j].flatten(n);
  return m;
}

std::vector<PolyScalar> scalar_monomials(int d, int k, bool homogeneous) {
  std::vector<PolyScalar> out;
  if (k < 0) return out;
  for (const auto &e : monomials(d, k))
    if (!homogeneous || exponent_degree(e) == k) out.push_back(PolyScalar::monomial(d, e));
  return out;
}

int space_dim(SpaceName name, int k, int d) {
  const int pk = poly_dim(k, d);
  switch (name) {
  case SpaceName::PkVec:
  case SpaceName::BDMk:
  case SpaceName::N2k: return d * pk;
  case SpaceName::RTk: return d * pk + hom_dim(k, d);
  case SpaceName::N1k:
    return d == 2 ? 2 * pk + hom_dim(k, 2) : 3 * pk + 3 * hom_dim(k, 3) - hom_dim(k - 1, 3);
  case SpaceName::XPk:
  case SpaceName::XPerpPk: return pk;
  case SpaceName::XWedgePk: return 3 * pk - poly_dim(k - 1, 3);
  case SpaceName::GradPk:
  case SpaceName::BrotPk: return std::max(pk - 1, 0);
  case SpaceName::CurlPk: return 3 * pk - (poly_dim(k + 1, 3) - 1);
  case SpaceName::Custom: return -1;
  }
  return -1;
}

namespace {

// Vector monomials e_c xi^alpha with |alpha| == s.
std::vector<PolyVector> vector_monomials_hom(int d, int s) {
  std::vector<PolyVector> out;
  for (int c = 0; c < d; ++c)
    for (const auto &q : scalar_monomials(d, s, true)) out.push_back(PolyVector::unit(c, q));
  return out;
}

// Accumulates members slice by slice, keeping only candidates independent of
// everything accepted so far (including an optional fixed prefix that is not
// part of the result).
class GreedyBuilder {
public:
  GreedyBuilder(int d, int degree) : d_(d), degree_(degree) {}

  void seed(const std::vector<PolyVector> &fixed) {
    for (const auto &v : fixed) cols_.push_back(v.flatten(degree_));
  }

  void add_slice(const std::vector<PolyVector> &cands) {
    std::vector<VectorXd> all = cols_;
    const int before = static_cast<int>(all.size());
    for (const auto &v : cands) all.push_back(v.flatten(degree_));
    if (all.empty()) {
      basis_.slices.push_back(basis_.size());
      return;
    }
    MatrixXd m(all.front().size(), all.size());
    for (std::size_t j = 0; j < all.size(); ++j) m.col(j) = all[j];
    const auto idx = independent_columns(m);
    for (int j : idx) {
      if (j < before) continue;
      cols_.push_back(all[j]);
      basis_.members.push_back(cands[j - before]);
    }
    basis_.slices.push_back(basis_.size());
  }

  SpaceBasis finish(SpaceName name, int k) {
    basis_.name = name;
    basis_.k = k;
    basis_.d = d_;
    basis_.slices.insert(basis_.slices.begin(), 0);
    return std::move(basis_);
  }

private:
  int d_;
  int degree_;
  std::vector<VectorXd> cols_;
  SpaceBasis basis_;
};

SpaceBasis pk_vec(SpaceName name, int k, int d) {
  GreedyBuilder b(d, k);
  for (int s = 0; s <= k; ++s) b.add_slice(vector_monomials_hom(d, s));
  return b.finish(name, k);
}

} // namespace

SpaceBasis build_basis(SpaceName name, int k, int d) {
  if (d != 2 && d != 3) throw ValidationError("build_basis: dimension must be 2 or 3");
  if (k < 0) throw ValidationError("build_basis: negative degree k=" + std::to_string(k));
  if (name == SpaceName::BDMk && k < 1) throw ValidationError("build_basis: BDM_k needs k >= 1");
  if ((name == SpaceName::XPerpPk || name == SpaceName::BrotPk) && d != 2)
    throw ValidationError("build_basis: " + to_string(name) + " is two-dimensional");
  if ((name == SpaceName::XWedgePk || name == SpaceName::CurlPk) && d != 3)
    throw ValidationError("build_basis: " + to_string(name) + " is three-dimensional");

  SpaceBasis out;
  switch (name) {
  case SpaceName::PkVec:
  case SpaceName::BDMk:
  case SpaceName::N2k: out = pk_vec(name, k, d); break;
  case SpaceName::RTk:
  case SpaceName::N1k: {
    GreedyBuilder b(d, k + 1);
    for (int s = 0; s <= k; ++s) b.add_slice(vector_monomials_hom(d, s));
    std::vector<PolyVector> extra;
    if (name == SpaceName::RTk || d == 2) {
      for (const auto &q : scalar_monomials(d, k, true))
        extra.push_back(name == SpaceName::RTk ? x_mul(q) : xperp_mul(q));
    } else {
      for (const auto &q : vector_monomials_hom(3, k)) extra.push_back(xwedge_mul(q));
    }
    b.add_slice(extra);
    out = b.finish(name, k);
    break;
  }
  case SpaceName::XPk:
  case SpaceName::XPerpPk:
  case SpaceName::XWedgePk: {
    GreedyBuilder b(d, k + 1);
    for (int s = 0; s <= k; ++s) {
      std::vector<PolyVector> cands;
      if (name == SpaceName::XWedgePk) {
        for (const auto &q : vector_monomials_hom(3, s)) cands.push_back(xwedge_mul(q));
      } else {
        for (const auto &q : scalar_monomials(d, s, true))
          cands.push_back(name == SpaceName::XPk ? x_mul(q) : xperp_mul(q));
      }
      b.add_slice(cands);
    }
    out = b.finish(name, k);
    break;
  }
  case SpaceName::GradPk:
  case SpaceName::BrotPk: {
    GreedyBuilder b(d, std::max(k - 1, 0));
    for (int s = 1; s <= k; ++s) {
      std::vector<PolyVector> cands;
      for (const auto &q : scalar_monomials(d, s, true))
        cands.push_back(name == SpaceName::GradPk ? grad(q) : brot2(q));
      b.add_slice(cands);
    }
    out = b.finish(name, k);
    break;
  }
  case SpaceName::CurlPk: {
    GreedyBuilder b(3, std::max(k - 1, 0));
    for (int s = 1; s <= k; ++s) {
      std::vector<PolyVector> cands;
      for (const auto &q : vector_monomials_hom(3, s)) cands.push_back(curl3(q));
      b.add_slice(cands);
    }
    out = b.finish(name, k);
    break;
  }
  case SpaceName::Custom: throw ValidationError("build_basis: custom spaces need explicit members");
  }
  const int expect = space_dim(name, k, d);
  if (out.size() != expect)
    throw InvariantError("build_basis: " + to_string(name) + " has dimension " + std::to_string(out.size()) +
                         ", expected " + std::to_string(expect));
  return out;
}

SpaceBasis custom_basis(int d, std::vector<PolyVector> members) {
  SpaceBasis out;
  out.name = SpaceName::Custom;
  out.d = d;
  out.members = std::move(members);
  out.k = out.degree();
  out.slices = {0, out.size()};
  if (out.size() > 0 && numerical_rank(out.matrix(), 1e-10) < out.size())
    throw ValidationError("custom_basis: members are linearly dependent");
  return out;
}

PolyScalar solve_rot_xperp(const PolyScalar &p) {
  if (p.dim() != 2) throw ValidationError("solve_rot_xperp: expects a 2D scalar");
  PolyScalar q(2, p.degree());
  for (int s = 0; s <= p.degree(); ++s) q += p.homogeneous_part(s) * (-1.0 / (s + 2));
  return q;
}

PolyScalar solve_div_x(const PolyScalar &p) {
  PolyScalar q(p.dim(), p.degree());
  for (int s = 0; s <= p.degree(); ++s) q += p.homogeneous_part(s) * (1.0 / (s + p.dim()));
  return q;
}

} // namespace vemser
