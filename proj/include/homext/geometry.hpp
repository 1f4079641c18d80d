#pragma once

#include <array>
#include <cmath>

#include "homext/errors.hpp"

namespace homext {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline bool is_finite(Point a) { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Signed area of the triangle (v0,v1,v2); positive for counterclockwise order.
inline double signed_area(Point v0, Point v1, Point v2) {
  return 0.5 * cross(v1 - v0, v2 - v0);
}

/// Triangle with vertices in counterclockwise order. Degenerate or clockwise
/// input is rejected at construction.
class Triangle {
 public:
  Triangle(Point v0, Point v1, Point v2) : v_{v0, v1, v2} {
    if (!is_finite(v0) || !is_finite(v1) || !is_finite(v2))
      fail(errc::degenerate_triangle, "non-finite vertex");
    if (signed_area(v0, v1, v2) <= 0.0)
      fail(errc::degenerate_triangle, "vertices not in strictly counterclockwise order");
  }

  Point v(int i) const { return v_[static_cast<size_t>(i)]; }
  const std::array<Point, 3>& vertices() const { return v_; }
  double area() const { return signed_area(v_[0], v_[1], v_[2]); }
  Point centroid() const {
    return {(v_[0].x + v_[1].x + v_[2].x) / 3.0, (v_[0].y + v_[1].y + v_[2].y) / 3.0};
  }
  /// Containment up to absolute slack `tol` on the barycentric edge functions.
  bool contains(Point p, double tol = 0.0) const;

 private:
  std::array<Point, 3> v_;
};

/// z -> linear*z + offset.
struct AffineMap {
  // Row-major linear part: [m00 m01; m10 m11].
  double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
  Point offset{0.0, 0.0};

  Point operator()(Point p) const {
    return {m00 * p.x + m01 * p.y + offset.x, m10 * p.x + m11 * p.y + offset.y};
  }
  double det() const { return m00 * m11 - m01 * m10; }

  static AffineMap identity() { return {}; }
};

/// a then b (i.e. compose(a,b)(z) = b(a(z))).
AffineMap compose(const AffineMap& a, const AffineMap& b);

/// Largest singular value of the linear part.
double operator_norm(const AffineMap& a);

/// The unique affine map with src[i] -> dst[i]. Vertex correspondence is by
/// index, never by geometric matching.
AffineMap affine_from_vertices(const std::array<Point, 3>& src, const std::array<Point, 3>& dst);
AffineMap affine_from_triangles(const Triangle& src, const Triangle& dst);

/// Scalar affine functional w(x,y) = cx*x + cy*y + c0.
struct AffineScalar {
  double cx = 0.0, cy = 0.0, c0 = 0.0;
  double operator()(Point p) const { return cx * p.x + cy * p.y + c0; }
};

/// Exact value of the singular integral  ∫_Δ w(z)^{-s} dA  for an affine
/// weight w ≥ 0 on Δ.  Requires s < 1 if w vanishes on an edge of Δ and
/// s < 2 if w vanishes at a single vertex; any s < 2 is accepted for
/// strictly positive w.  Reduces to a second divided difference of the
/// second antiderivative of t^{-s}.
double weighted_triangle_integral(const Triangle& tri, const AffineScalar& w, double s);

/// True if the (closed) triangles overlap with penetration depth > tol on
/// every separating-axis candidate, i.e. share interior area beyond tol.
bool triangles_overlap(const Triangle& a, const Triangle& b, double tol);

/// Proper or improper crossing of segments (a0,a1) and (b0,b1), with
/// endpoint touches within `tol` counted as crossings.
bool segments_intersect(Point a0, Point a1, Point b0, Point b1, double tol);

}  // namespace homext
