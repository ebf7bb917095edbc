#include "vemser/polynomial.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>

namespace vemser {

int poly_dim(int k, int d) {
  if (k < 0) return 0;
  switch (d) {
  case 1: return k + 1;
  case 2: return (k + 1) * (k + 2) / 2;
  case 3: return (k + 1) * (k + 2) * (k + 3) / 6;
  default: throw std::invalid_argument("poly_dim: dimension must be 1, 2 or 3");
  }
}

int monomial_index(const Exponent &e, int d) {
  const int n = e[0] + (d > 1 ? e[1] : 0) + (d > 2 ? e[2] : 0);
  if (d == 1) return e[0];
  if (d == 2) return poly_dim(n - 1, 2) + e[1];
  const int m = n - e[0];
  return poly_dim(n - 1, 3) + m * (m + 1) / 2 + (m - e[1]);
}

const std::vector<Exponent> &monomials(int d, int k) {
  static std::mutex mtx;
  static std::map<std::pair<int, int>, std::vector<Exponent>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(d, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Exponent> out;
  out.reserve(poly_dim(k, d));
  for (int n = 0; n <= k; ++n) {
    if (d == 1) {
      out.push_back({n, 0, 0});
    } else if (d == 2) {
      for (int a = n; a >= 0; --a) out.push_back({a, n - a, 0});
    } else {
      for (int a = n; a >= 0; --a) {
        const int m = n - a;
        for (int b = m; b >= 0; --b) out.push_back({a, b, m - b});
      }
    }
  }
  return cache.emplace(key, std::move(out)).first->second;
}

// ---------------------------------------------------------------- PolyScalar

PolyScalar::PolyScalar(int dim, int degree)
    : dim_(dim), degree_(std::max(degree, 0)),
      coeffs_(VectorXd::Zero(poly_dim(std::max(degree, 0), dim))) {}

PolyScalar::PolyScalar(int dim, int degree, VectorXd coeffs)
    : dim_(dim), degree_(degree), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != poly_dim(degree, dim))
    throw std::invalid_argument("PolyScalar: coefficient vector has wrong length");
}

PolyScalar PolyScalar::constant(int dim, double c) {
  PolyScalar p(dim, 0);
  p.coeffs_(0) = c;
  return p;
}

PolyScalar PolyScalar::monomial(int dim, const Exponent &e, double c) {
  PolyScalar p(dim, exponent_degree(e));
  p.coeffs_(monomial_index(e, dim)) = c;
  return p;
}

PolyScalar PolyScalar::coordinate(int dim, int i) {
  Exponent e{0, 0, 0};
  e[i] = 1;
  return monomial(dim, e);
}

PolyScalar PolyScalar::affine(const VectorXd &g, double c0) {
  const int d = static_cast<int>(g.size());
  PolyScalar p(d, 1);
  p.coeffs_(0) = c0;
  for (int i = 0; i < d; ++i) p.coeffs_(1 + i) = g(i);
  return p;
}

double PolyScalar::coeff(const Exponent &e) const {
  if (exponent_degree(e) > degree_) return 0.0;
  return coeffs_(monomial_index(e, dim_));
}

PolyScalar PolyScalar::padded(int n) const {
  n = std::max(n, 0);
  PolyScalar out(dim_, n);
  const int m = std::min(out.coeffs_.size(), coeffs_.size());
  out.coeffs_.head(m) = coeffs_.head(m);
  return out;
}

PolyScalar PolyScalar::trimmed(double tol) const {
  int n = degree_;
  while (n > 0) {
    const int lo = poly_dim(n - 1, dim_);
    if (coeffs_.segment(lo, coeffs_.size() - lo).cwiseAbs().maxCoeff() > tol) break;
    --n;
  }
  return padded(n);
}

PolyScalar PolyScalar::homogeneous_part(int s) const {
  PolyScalar out(dim_, s);
  if (s < 0 || s > degree_) return out;
  const int lo = poly_dim(s - 1, dim_);
  const int len = hom_dim(s, dim_);
  out.coeffs_.segment(lo, len) = coeffs_.segment(lo, len);
  return out;
}

double PolyScalar::operator()(const Eigen::Ref<const VectorXd> &xi) const {
  std::array<std::vector<double>, 3> pw;
  for (int i = 0; i < dim_; ++i) {
    pw[i].assign(degree_ + 1, 1.0);
    for (int j = 1; j <= degree_; ++j) pw[i][j] = pw[i][j - 1] * xi(i);
  }
  const auto &mons = monomials(dim_, degree_);
  double s = 0.0;
  for (std::size_t a = 0; a < mons.size(); ++a) {
    const double c = coeffs_(a);
    if (c == 0.0) continue;
    double t = c;
    for (int i = 0; i < dim_; ++i) t *= pw[i][mons[a][i]];
    s += t;
  }
  return s;
}

PolyScalar PolyScalar::derivative(int i) const {
  PolyScalar out(dim_, degree_ - 1);
  const auto &mons = monomials(dim_, degree_);
  for (std::size_t a = 0; a < mons.size(); ++a) {
    if (mons[a][i] == 0 || coeffs_(a) == 0.0) continue;
    Exponent e = mons[a];
    const int p = e[i]--;
    out.coeffs_(monomial_index(e, dim_)) += p * coeffs_(a);
  }
  return out;
}

bool PolyScalar::is_zero(double tol) const {
  return coeffs_.size() == 0 || coeffs_.cwiseAbs().maxCoeff() <= tol;
}

PolyScalar &PolyScalar::operator+=(const PolyScalar &o) {
  if (o.dim_ != dim_) throw std::invalid_argument("PolyScalar: dimension mismatch");
  if (o.degree_ > degree_) *this = padded(o.degree_);
  coeffs_.head(o.coeffs_.size()) += o.coeffs_;
  return *this;
}

PolyScalar &PolyScalar::operator-=(const PolyScalar &o) {
  if (o.dim_ != dim_) throw std::invalid_argument("PolyScalar: dimension mismatch");
  if (o.degree_ > degree_) *this = padded(o.degree_);
  coeffs_.head(o.coeffs_.size()) -= o.coeffs_;
  return *this;
}

PolyScalar &PolyScalar::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

PolyScalar PolyScalar::operator-() const {
  PolyScalar out = *this;
  out.coeffs_ = -out.coeffs_;
  return out;
}

static void append_term(std::string &out, double c, const Exponent &e, int dim, int precision) {
  static const char *names[3] = {"x", "y", "z"};
  char buf[64];
  const bool neg = c < 0;
  const double a = std::fabs(c);
  if (out.empty())
    out += neg ? "-" : "";
  else
    out += neg ? " - " : " + ";
  const bool unit = exponent_degree(e) > 0 && a == 1.0;
  if (!unit) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, a);
    out += buf;
  }
  bool first = unit;
  for (int i = 0; i < dim; ++i) {
    if (e[i] == 0) continue;
    if (!first) out += "*";
    first = false;
    out += names[i];
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
}

std::string PolyScalar::str(int precision) const {
  std::string out;
  const auto &mons = monomials(dim_, degree_);
  for (std::size_t a = 0; a < mons.size(); ++a)
    if (coeffs_(a) != 0.0) append_term(out, coeffs_(a), mons[a], dim_, precision);
  return out.empty() ? "0" : out;
}

PolyScalar operator+(PolyScalar a, const PolyScalar &b) { return a += b; }
PolyScalar operator-(PolyScalar a, const PolyScalar &b) { return a -= b; }
PolyScalar operator*(PolyScalar a, double s) { return a *= s; }
PolyScalar operator*(double s, PolyScalar a) { return a *= s; }

PolyScalar operator*(const PolyScalar &a, const PolyScalar &b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("PolyScalar: dimension mismatch");
  const int d = a.dim();
  PolyScalar out(d, a.degree() + b.degree());
  const auto &ma = monomials(d, a.degree());
  const auto &mb = monomials(d, b.degree());
  for (std::size_t i = 0; i < ma.size(); ++i) {
    const double ca = a.coeffs()(i);
    if (ca == 0.0) continue;
    for (std::size_t j = 0; j < mb.size(); ++j) {
      const double cb = b.coeffs()(j);
      if (cb == 0.0) continue;
      Exponent e{ma[i][0] + mb[j][0], ma[i][1] + mb[j][1], ma[i][2] + mb[j][2]};
      out.coeffs()(monomial_index(e, d)) += ca * cb;
    }
  }
  return out;
}

PolyScalar compose(const PolyScalar &p, const std::vector<PolyScalar> &subs) {
  if (static_cast<int>(subs.size()) != p.dim())
    throw std::invalid_argument("compose: need one substitution per variable");
  const int d = subs.front().dim();
  const int n = p.degree();
  std::vector<std::vector<PolyScalar>> pw(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    pw[i].push_back(PolyScalar::constant(d, 1.0));
    for (int j = 1; j <= n; ++j) pw[i].push_back(pw[i].back() * subs[i]);
  }
  PolyScalar out(d, 0);
  const auto &mons = monomials(p.dim(), n);
  for (std::size_t a = 0; a < mons.size(); ++a) {
    const double c = p.coeffs()(a);
    if (c == 0.0) continue;
    PolyScalar t = PolyScalar::constant(d, c);
    for (int i = 0; i < p.dim(); ++i)
      if (mons[a][i] > 0) t = t * pw[i][mons[a][i]];
    out += t;
  }
  return out;
}

// ---------------------------------------------------------------- PolyVector

PolyVector::PolyVector(int dim, int degree) : comps_(dim, PolyScalar(dim, degree)) {}

PolyVector::PolyVector(std::vector<PolyScalar> comps) : comps_(std::move(comps)) {
  const int n = degree();
  for (auto &c : comps_) c = c.padded(n);
}

PolyVector PolyVector::unit(int c, const PolyScalar &p) {
  PolyVector v(p.dim(), p.degree());
  v.comps_[c] = p;
  return v;
}

PolyVector PolyVector::constant(const VectorXd &c) {
  const int d = static_cast<int>(c.size());
  PolyVector v(d, 0);
  for (int i = 0; i < d; ++i) v.comps_[i] = PolyScalar::constant(d, c(i));
  return v;
}

PolyVector PolyVector::from_flat(int dim, int degree, const Eigen::Ref<const VectorXd> &v) {
  const int n = poly_dim(degree, dim);
  if (v.size() != dim * n) throw std::invalid_argument("PolyVector::from_flat: bad length");
  PolyVector out(dim, degree);
  for (int c = 0; c < dim; ++c) out.comps_[c].coeffs() = v.segment(c * n, n);
  return out;
}

int PolyVector::degree() const {
  int n = 0;
  for (const auto &c : comps_) n = std::max(n, c.degree());
  return n;
}

PolyVector PolyVector::padded(int n) const {
  PolyVector out = *this;
  for (auto &c : out.comps_) c = c.padded(n);
  return out;
}

PolyVector PolyVector::trimmed(double tol) const {
  int n = 0;
  for (const auto &c : comps_) n = std::max(n, c.trimmed(tol).degree());
  return padded(n);
}

VectorXd PolyVector::flatten(int n) const {
  const int m = poly_dim(n, comps_.empty() ? 1 : comps_[0].dim());
  VectorXd out(dim() * m);
  for (int c = 0; c < dim(); ++c) {
    const PolyScalar p = comps_[c].padded(n);
    out.segment(c * m, m) = p.coeffs();
  }
  return out;
}

VectorXd PolyVector::operator()(const Eigen::Ref<const VectorXd> &xi) const {
  VectorXd out(dim());
  for (int c = 0; c < dim(); ++c) out(c) = comps_[c](xi);
  return out;
}

bool PolyVector::is_zero(double tol) const {
  for (const auto &c : comps_)
    if (!c.is_zero(tol)) return false;
  return true;
}

PolyVector &PolyVector::operator+=(const PolyVector &o) {
  if (o.dim() != dim()) throw std::invalid_argument("PolyVector: dimension mismatch");
  for (int c = 0; c < dim(); ++c) comps_[c] += o.comps_[c];
  return *this;
}

PolyVector &PolyVector::operator-=(const PolyVector &o) {
  if (o.dim() != dim()) throw std::invalid_argument("PolyVector: dimension mismatch");
  for (int c = 0; c < dim(); ++c) comps_[c] -= o.comps_[c];
  return *this;
}

PolyVector &PolyVector::operator*=(double s) {
  for (auto &c : comps_) c *= s;
  return *this;
}

std::string PolyVector::str(int precision) const {
  std::string out = "(";
  for (int c = 0; c < dim(); ++c) {
    if (c) out += ", ";
    out += comps_[c].str(precision);
  }
  return out + ")";
}

PolyVector operator+(PolyVector a, const PolyVector &b) { return a += b; }
PolyVector operator-(PolyVector a, const PolyVector &b) { return a -= b; }
PolyVector operator*(PolyVector a, double s) { return a *= s; }
PolyVector operator*(double s, PolyVector a) { return a *= s; }

PolyVector operator*(const PolyScalar &p, const PolyVector &v) {
  std::vector<PolyScalar> comps;
  for (int c = 0; c < v.dim(); ++c) comps.push_back(p * v[c]);
  return PolyVector(std::move(comps));
}

PolyScalar dot(const PolyVector &a, const PolyVector &b) {
  PolyScalar out(a[0].dim(), 0);
  for (int c = 0; c < a.dim(); ++c) out += a[c] * b[c];
  return out;
}

PolyScalar dot(const PolyVector &a, const VectorXd &c) {
  PolyScalar out(a[0].dim(), a.degree());
  for (int i = 0; i < a.dim(); ++i) out += a[i] * c(i);
  return out;
}

// ---------------------------------------------------------------- operators

PolyVector grad(const PolyScalar &p, double h) {
  std::vector<PolyScalar> comps;
  for (int i = 0; i < p.dim(); ++i) comps.push_back(p.derivative(i) * (1.0 / h));
  return PolyVector(std::move(comps));
}

PolyScalar div(const PolyVector &v, double h) {
  PolyScalar out(v.dim(), std::max(v.degree() - 1, 0));
  for (int i = 0; i < v.dim(); ++i) out += v[i].derivative(i);
  return out * (1.0 / h);
}

PolyScalar rot2(const PolyVector &v, double h) {
  if (v.dim() != 2) throw std::invalid_argument("rot2: expects a 2D field");
  return (v[1].derivative(0) - v[0].derivative(1)) * (1.0 / h);
}

PolyVector brot2(const PolyScalar &q, double h) {
  if (q.dim() != 2) throw std::invalid_argument("brot2: expects a 2D scalar");
  return PolyVector({q.derivative(1) * (1.0 / h), -q.derivative(0) * (1.0 / h)});
}

PolyVector curl3(const PolyVector &v, double h) {
  if (v.dim() != 3) throw std::invalid_argument("curl3: expects a 3D field");
  return PolyVector({(v[2].derivative(1) - v[1].derivative(2)) * (1.0 / h),
                     (v[0].derivative(2) - v[2].derivative(0)) * (1.0 / h),
                     (v[1].derivative(0) - v[0].derivative(1)) * (1.0 / h)});
}

PolyVector x_mul(const PolyScalar &q) {
  std::vector<PolyScalar> comps;
  for (int i = 0; i < q.dim(); ++i) comps.push_back(PolyScalar::coordinate(q.dim(), i) * q);
  return PolyVector(std::move(comps));
}

PolyVector xperp_mul(const PolyScalar &q) {
  if (q.dim() != 2) throw std::invalid_argument("xperp_mul: expects a 2D scalar");
  return PolyVector({PolyScalar::coordinate(2, 1) * q, -(PolyScalar::coordinate(2, 0) * q)});
}

PolyVector cross(const PolyVector &a, const PolyVector &b) {
  if (a.dim() != 3 || b.dim() != 3) throw std::invalid_argument("cross: expects 3D fields");
  return PolyVector({a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]});
}

PolyVector cross(const VectorXd &c, const PolyVector &b) {
  if (c.size() != 3 || b.dim() != 3) throw std::invalid_argument("cross: expects 3D fields");
  return PolyVector({b[2] * c(1) - b[1] * c(2), b[0] * c(2) - b[2] * c(0), b[1] * c(0) - b[0] * c(1)});
}

PolyVector xwedge_mul(const PolyVector &q) {
  return cross(x_mul(PolyScalar::constant(3, 1.0)), q);
}

} // namespace vemser
