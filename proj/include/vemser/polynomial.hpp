#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace vemser {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using Exponent = std::array<int, 3>;

/// Dimension of P_k in d variables ((k+1)(k+2)/2 for d=2, (k+1)(k+2)(k+3)/6
/// for d=3); zero for k < 0.
int poly_dim(int k, int d);

/// Number of homogeneous monomials of degree exactly s in d variables.
inline int hom_dim(int s, int d) { return poly_dim(s, d) - poly_dim(s - 1, d); }

/// Graded-lexicographic position of a monomial (degree first, then
/// descending powers of x1, x2, ...).
int monomial_index(const Exponent &e, int d);

/// Exponents of all monomials of degree <= k, in graded-lex order.
const std::vector<Exponent> &monomials(int d, int k);

inline int exponent_degree(const Exponent &e) { return e[0] + e[1] + e[2]; }

/// Scalar polynomial in d scaled variables with a dense graded-lex coefficient
/// vector. The degree is an upper bound; coefficients above the true degree
/// may be zero.
class PolyScalar {
public:
  PolyScalar() : PolyScalar(2, 0) {}
  PolyScalar(int dim, int degree);
  PolyScalar(int dim, int degree, VectorXd coeffs);

  static PolyScalar constant(int dim, double c);
  static PolyScalar monomial(int dim, const Exponent &e, double c = 1.0);
  static PolyScalar coordinate(int dim, int i);
  /// c0 + g . xi
  static PolyScalar affine(const VectorXd &g, double c0);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const VectorXd &coeffs() const { return coeffs_; }
  VectorXd &coeffs() { return coeffs_; }
  double coeff(const Exponent &e) const;

  /// Same polynomial with the degree bound raised (or lowered, if the dropped
  /// coefficients vanish) to n.
  PolyScalar padded(int n) const;
  /// Lowest degree bound that keeps all coefficients with |c| > tol.
  PolyScalar trimmed(double tol = 0.0) const;
  PolyScalar homogeneous_part(int s) const;

  double operator()(const Eigen::Ref<const VectorXd> &xi) const;
  /// Partial derivative with respect to scaled variable i.
  PolyScalar derivative(int i) const;

  bool is_zero(double tol = 0.0) const;

  PolyScalar &operator+=(const PolyScalar &o);
  PolyScalar &operator-=(const PolyScalar &o);
  PolyScalar &operator*=(double s);
  PolyScalar operator-() const;

  std::string str(int precision = 10) const;

private:
  int dim_;
  int degree_;
  VectorXd coeffs_;
};

PolyScalar operator+(PolyScalar a, const PolyScalar &b);
PolyScalar operator-(PolyScalar a, const PolyScalar &b);
PolyScalar operator*(PolyScalar a, double s);
PolyScalar operator*(double s, PolyScalar a);
PolyScalar operator*(const PolyScalar &a, const PolyScalar &b);

/// Substitute variable i of p by subs[i]; all subs share one dimension.
PolyScalar compose(const PolyScalar &p, const std::vector<PolyScalar> &subs);

/// Vector-valued polynomial: d components sharing dimension and degree bound.
class PolyVector {
public:
  PolyVector() = default;
  PolyVector(int dim, int degree);
  explicit PolyVector(std::vector<PolyScalar> comps);

  /// e_c * p
  static PolyVector unit(int c, const PolyScalar &p);
  static PolyVector constant(const VectorXd &c);
  /// Inverse of flatten().
  static PolyVector from_flat(int dim, int degree, const Eigen::Ref<const VectorXd> &v);

  int dim() const { return static_cast<int>(comps_.size()); }
  int degree() const;
  const PolyScalar &operator[](int c) const { return comps_[c]; }
  PolyScalar &operator[](int c) { return comps_[c]; }

  PolyVector padded(int n) const;
  PolyVector trimmed(double tol = 0.0) const;
  /// Component-major coefficients at degree bound n (length dim * poly_dim(n)).
  VectorXd flatten(int n) const;
  VectorXd operator()(const Eigen::Ref<const VectorXd> &xi) const;
  bool is_zero(double tol = 0.0) const;

  PolyVector &operator+=(const PolyVector &o);
  PolyVector &operator-=(const PolyVector &o);
  PolyVector &operator*=(double s);

  std::string str(int precision = 10) const;

private:
  std::vector<PolyScalar> comps_;
};

PolyVector operator+(PolyVector a, const PolyVector &b);
PolyVector operator-(PolyVector a, const PolyVector &b);
PolyVector operator*(PolyVector a, double s);
PolyVector operator*(double s, PolyVector a);
PolyVector operator*(const PolyScalar &p, const PolyVector &v);
PolyScalar dot(const PolyVector &a, const PolyVector &b);
/// Pointwise dot with a constant vector.
PolyScalar dot(const PolyVector &a, const VectorXd &c);

// Differential operators. Polynomials live in scaled coordinates
// xi = (x - x_E) / h; pass the element diameter h to get derivatives with
// respect to the physical x (the default h = 1 differentiates in xi).

PolyVector grad(const PolyScalar &p, double h = 1.0);
PolyScalar div(const PolyVector &v, double h = 1.0);
/// dv2/dx - dv1/dy
PolyScalar rot2(const PolyVector &v, double h = 1.0);
/// (dq/dy, -dq/dx)
PolyVector brot2(const PolyScalar &q, double h = 1.0);
PolyVector curl3(const PolyVector &v, double h = 1.0);

// Multiplication by the scaled position xi.

PolyVector x_mul(const PolyScalar &q);
/// xi^perp q with u^perp = (u2, -u1)
PolyVector xperp_mul(const PolyScalar &q);
/// xi ^ q (cross product)
PolyVector xwedge_mul(const PolyVector &q);
PolyVector cross(const PolyVector &a, const PolyVector &b);
PolyVector cross(const VectorXd &c, const PolyVector &b);

/// Matrix of a linear operator between flattened vector polynomials:
/// column j is op(basis vector j) flattened at out_degree.
template <class Op>
MatrixXd operator_matrix(int dim, int in_degree, int out_dim, int out_degree, Op op) {
  const int nin = dim * poly_dim(in_degree, dim);
  const int nout = out_dim * poly_dim(out_degree, dim);
  MatrixXd m = MatrixXd::Zero(nout, nin);
  VectorXd e = VectorXd::Zero(nin);
  for (int j = 0; j < nin; ++j) {
    e.setZero();
    e(j) = 1.0;
    m.col(j) = op(PolyVector::from_flat(dim, in_degree, e)).flatten(out_degree);
  }
  return m;
}

} // namespace vemser
