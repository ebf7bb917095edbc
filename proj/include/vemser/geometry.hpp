#pragma once

#include "vemser/polynomial.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <vector>

namespace vemser {

using Eigen::Vector2d;
using Eigen::Vector3d;

/// Simplex stored as columns of vertex coordinates (d x (d+1)).
struct Simplex {
  MatrixXd v;
  double measure = 0.0;
};

struct PolygonEdge {
  int a = 0, b = 0;
  Vector2d p0, p1, mid, tangent, normal;
  double length = 0.0;
};

/// Simple counterclockwise polygon.
class Polygon {
public:
  Polygon() = default;
  explicit Polygon(std::vector<Vector2d> vertices);

  const std::vector<Vector2d> &vertices() const { return verts_; }
  const std::vector<PolygonEdge> &edges() const { return edges_; }
  int size() const { return static_cast<int>(verts_.size()); }
  const Vector2d &centroid() const { return centroid_; }
  double diameter() const { return diameter_; }
  double area() const { return area_; }

  bool is_convex() const;
  /// Indices of vertices with a reflex interior angle.
  std::vector<int> reflex_vertices() const;
  /// Centroid fan when convex, ear clipping otherwise.
  std::vector<Simplex> simplexify() const;

private:
  std::vector<Vector2d> verts_;
  std::vector<PolygonEdge> edges_;
  Vector2d centroid_ = Vector2d::Zero();
  double diameter_ = 0.0;
  double area_ = 0.0;
};

/// Orthonormal right-handed frame (a1, a2, n) attached to a face.
struct LocalFrame {
  Vector3d origin = Vector3d::Zero();
  Vector3d a1 = Vector3d::UnitX(), a2 = Vector3d::UnitY(), n = Vector3d::UnitZ();

  Vector2d to_local(const Vector3d &x) const { return {(x - origin).dot(a1), (x - origin).dot(a2)}; }
  Vector3d to_global(const Vector2d &u) const { return origin + u(0) * a1 + u(1) * a2; }
};

struct PolyhedronFace {
  std::vector<int> verts;
  LocalFrame frame; ///< origin at the face centroid, n outward
  Polygon local;    ///< face polygon in frame coordinates
  double area = 0.0;
  double diameter = 0.0;
  Vector3d centroid = Vector3d::Zero();
  /// Geometric edge index and orientation (+1 if the face traverses it from a to b).
  std::vector<std::pair<int, int>> edges;
};

struct PolyhedronEdge {
  int a = 0, b = 0; ///< a < b; tangent points from a to b
  Vector3d p0, p1, mid, tangent;
  double length = 0.0;
  std::array<int, 2> faces{-1, -1};
};

/// Closed polyhedron with outward-oriented planar faces.
class Polyhedron {
public:
  Polyhedron() = default;
  Polyhedron(std::vector<Vector3d> vertices, std::vector<std::vector<int>> faces);

  const std::vector<Vector3d> &vertices() const { return verts_; }
  const std::vector<PolyhedronFace> &faces() const { return faces_; }
  const std::vector<PolyhedronEdge> &edges() const { return edges_; }
  const Vector3d &centroid() const { return centroid_; }
  double diameter() const { return diameter_; }
  double volume() const { return volume_; }

  bool is_tetrahedron() const { return verts_.size() == 4 && faces_.size() == 4; }
  bool is_convex() const;
  /// Tetrahedra: itself when a tetrahedron, otherwise face fans coned to the centroid.
  std::vector<Simplex> simplexify() const;

private:
  std::vector<Vector3d> verts_;
  std::vector<PolyhedronFace> faces_;
  std::vector<PolyhedronEdge> edges_;
  Vector3d centroid_ = Vector3d::Zero();
  double diameter_ = 0.0;
  double volume_ = 0.0;
};

/// A polygon or polyhedron together with the scaling used for polynomials:
/// xi = (x - origin) / h, with origin defaulting to the centroid and h the diameter.
class Element {
public:
  Element() = default;
  explicit Element(Polygon p);
  explicit Element(Polyhedron p);

  int dim() const { return dim_; }
  const Polygon &polygon() const { return polygon_; }
  const Polyhedron &polyhedron() const { return polyhedron_; }

  const VectorXd &origin() const { return origin_; }
  double h() const { return h_; }
  VectorXd centroid() const;
  double measure() const;
  bool is_convex() const;
  bool is_simplex() const;
  int num_facets() const;
  int num_vertices() const;
  VectorXd vertex(int i) const;

  /// Copy with the scaling origin moved to x0.
  Element with_origin(const VectorXd &x0) const;

  VectorXd to_scaled(const VectorXd &x) const { return (x - origin_) / h_; }
  VectorXd from_scaled(const VectorXd &xi) const { return origin_ + h_ * xi; }

  std::vector<Simplex> simplexify() const;

private:
  int dim_ = 0;
  Polygon polygon_;
  Polyhedron polyhedron_;
  VectorXd origin_;
  double h_ = 1.0;
};

struct CoverOptions {
  double theta0 = 0.05;
  double dist_tol = 1e-6;
};

/// Grouping of boundary facets into supporting lines or planes.
struct Cover {
  int eta = 0;
  std::vector<std::vector<int>> groups;
  /// Per group: unit normal and offset of n.x = c (physical coordinates).
  std::vector<VectorXd> normals;
  std::vector<double> offsets;
  /// Per group: the normalized equation in scaled coordinates, positive at the
  /// centroid with sup over the element equal to 1.
  std::vector<PolyScalar> equations;
};

/// Facet count at which the exact cover search gives way to a greedy merge.
inline constexpr int kExactCoverLimit = 20;

Cover eta_cover(const Element &e, const CoverOptions &opt = {});
/// Product of the cover equations, in scaled coordinates.
PolyScalar bubble_poly(const Cover &c, const Element &e, const CoverOptions &opt = {});

/// Facet compatibility used by the cover: normals within theta0 and every
/// vertex of each facet within dist_tol * h of the other's line or plane.
bool facets_compatible(const Element &e, int i, int j, const CoverOptions &opt);

} // namespace vemser
