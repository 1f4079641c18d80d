#include "homext/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace homext {

bool Triangle::contains(Point p, double tol) const {
  const double e0 = cross(v_[1] - v_[0], p - v_[0]);
  const double e1 = cross(v_[2] - v_[1], p - v_[1]);
  const double e2 = cross(v_[0] - v_[2], p - v_[2]);
  return e0 >= -tol && e1 >= -tol && e2 >= -tol;
}

AffineMap compose(const AffineMap& a, const AffineMap& b) {
  AffineMap r;
  r.m00 = b.m00 * a.m00 + b.m01 * a.m10;
  r.m01 = b.m00 * a.m01 + b.m01 * a.m11;
  r.m10 = b.m10 * a.m00 + b.m11 * a.m10;
  r.m11 = b.m10 * a.m01 + b.m11 * a.m11;
  r.offset = b(a.offset);
  return r;
}

double operator_norm(const AffineMap& a) {
  // sigma_max = (|(m00+m11, m01-m10)| + |(m00-m11, m01+m10)|) / 2,
  // the stable form of the 2x2 singular value.
  const double s = std::hypot(a.m00 + a.m11, a.m01 - a.m10);
  const double d = std::hypot(a.m00 - a.m11, a.m01 + a.m10);
  return 0.5 * (s + d);
}

AffineMap affine_from_vertices(const std::array<Point, 3>& src, const std::array<Point, 3>& dst) {
  const Point e1 = src[1] - src[0];
  const Point e2 = src[2] - src[0];
  const double det = cross(e1, e2);
  const double scale = std::max({std::abs(e1.x), std::abs(e1.y), std::abs(e2.x), std::abs(e2.y)});
  if (!(std::abs(det) > 1e-12 * scale * scale))
    fail(errc::degenerate_source, "source triangle is (numerically) degenerate");

  const Point f1 = dst[1] - dst[0];
  const Point f2 = dst[2] - dst[0];
  AffineMap m;
  // M = [f1 f2] * [e1 e2]^{-1}
  m.m00 = (f1.x * e2.y - f2.x * e1.y) / det;
  m.m01 = (f2.x * e1.x - f1.x * e2.x) / det;
  m.m10 = (f1.y * e2.y - f2.y * e1.y) / det;
  m.m11 = (f2.y * e1.x - f1.y * e2.x) / det;
  m.offset = {dst[0].x - (m.m00 * src[0].x + m.m01 * src[0].y),
              dst[0].y - (m.m10 * src[0].x + m.m11 * src[0].y)};
  return m;
}

AffineMap affine_from_triangles(const Triangle& src, const Triangle& dst) {
  return affine_from_vertices(src.vertices(), dst.vertices());
}

namespace {

// Second antiderivative of t^{-s} (vanishing fast enough at 0 when s < 1),
// its derivative, and divided differences thereof.  The identity behind
// weighted_triangle_integral is Hermite-Genocchi:
//   ∫_Δref (a·λ0 + b·λ1 + c·λ2)^{-s} dλ = g[a,b,c]  with  g'' = t^{-s}.
struct PowerG {
  double s;

  double g(double t) const {
    if (t == 0.0) return 0.0;  // valid for s < 2 (the only zero-reaching cases)
    if (s == 1.0) return t * (std::log(t) - 1.0);
    if (s == 2.0) return -std::log(t);
    return std::pow(t, 2.0 - s) / ((1.0 - s) * (2.0 - s));
  }

  double dg(double t) const {
    if (t == 0.0) return 0.0;  // reached only when s < 1
    if (s == 1.0) return std::log(t);
    if (s == 2.0) return -1.0 / t;
    return std::pow(t, 1.0 - s) / (1.0 - s);
  }

  // First divided difference g[u,v], 0 <= u <= v, stable for u ~ v.
  double dd1(double u, double v) const {
    if (u == v) return dg(u);
    if (u > 0.0 && v <= 2.0 * u) {
      const double x = (v - u) / u;
      if (s == 1.0) return std::log(u) + (1.0 + x) * (std::log1p(x) / x) - 1.0;
      if (s == 2.0) return -std::log1p(x) / (u * x);
      const double r = 2.0 - s;
      return std::pow(u, r) * std::expm1(r * std::log1p(x)) / ((1.0 - s) * (2.0 - s) * (v - u));
    }
    return (g(v) - g(u)) / (v - u);
  }

  // Second divided difference g[a,b,c] for sorted 0 <= a <= b <= c.
  double dd2(double a, double b, double c) const {
    if (a == c) return 0.5 * std::pow(a, -s);
    if (a > 0.0 && (c - a) < 0.2 * a) return dd2_series(a, b, c);
    return (dd1(b, c) - dd1(a, b)) / (c - a);
  }

  // Taylor expansion about the vertex mean; used when the spread is small and
  // the direct difference would cancel.  Writing m for the mean and d_i for
  // the centered values, the simplex moments give
  //   g[a,b,c] = sum_n (-1)^n (s)_n / (n+2)! * h_n(d) * m^{-s-n},
  // h_n the complete homogeneous symmetric polynomial (h_1 = 0).
  double dd2_series(double a, double b, double c) const {
    const double m = (a + b + c) / 3.0;
    const double d[3] = {a - m, b - m, c - m};
    constexpr int kMax = 48;
    double pa[kMax + 1], pb[kMax + 1], pc[kMax + 1];
    pa[0] = pb[0] = pc[0] = 1.0;
    for (int n = 1; n <= kMax; ++n) {
      pa[n] = pa[n - 1] * d[0];
      pb[n] = pb[n - 1] * d[1];
      pc[n] = pc[n - 1] * d[2];
    }
    double acc = 0.0;
    double coeff = 0.5;  // (-1)^n (s)_n / (n+2)!  at n = 0
    double mpow = std::pow(m, -s);
    for (int n = 0; n <= kMax; ++n) {
      if (n > 0) {
        coeff *= -(s + (n - 1)) / (n + 2);
        mpow /= m;
      }
      if (n == 1) continue;  // h_1 = 0 by centering
      double h = 0.0;
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n - i; ++j) h += pa[i] * pb[j] * pc[n - i - j];
      const double term = coeff * h * mpow;
      acc += term;
      if (n > 2 && std::abs(term) < 1e-18 * std::abs(acc)) break;
    }
    return acc;
  }
};

}  // namespace

double weighted_triangle_integral(const Triangle& tri, const AffineScalar& w, double s) {
  double v[3] = {w(tri.v(0)), w(tri.v(1)), w(tri.v(2))};
  for (double value : v) {
    if (!std::isfinite(value)) fail(errc::negative_weight, "non-finite weight value");
    if (value < 0.0) fail(errc::negative_weight, "weight negative at a triangle vertex");
  }
  if (!std::isfinite(s) || s >= 2.0)
    fail(errc::divergent_integral, "exponent must satisfy s < 2");
  std::sort(v, v + 3);
  const int zeros = (v[0] == 0.0) + (v[1] == 0.0) + (v[2] == 0.0);
  if (zeros == 3) {
    // w vanishes identically on the triangle.
    if (s > 0.0) fail(errc::divergent_integral, "weight vanishes identically and s > 0");
    return s == 0.0 ? tri.area() : 0.0;
  }
  if (zeros == 2 && s >= 1.0)
    fail(errc::divergent_integral, "weight vanishes on an edge and s >= 1");
  return 2.0 * tri.area() * PowerG{s}.dd2(v[0], v[1], v[2]);
}

bool triangles_overlap(const Triangle& a, const Triangle& b, double tol) {
  const Triangle* tris[2] = {&a, &b};
  for (const Triangle* t : tris) {
    for (int i = 0; i < 3; ++i) {
      const Point p = t->v(i);
      const Point q = t->v((i + 1) % 3);
      const Point axis{-(q.y - p.y), q.x - p.x};  // outward-ish normal; sign irrelevant
      double mina = std::numeric_limits<double>::infinity(), maxa = -mina;
      double minb = mina, maxb = maxa;
      for (int k = 0; k < 3; ++k) {
        const double pa = dot(axis, a.v(k));
        const double pb = dot(axis, b.v(k));
        mina = std::min(mina, pa), maxa = std::max(maxa, pa);
        minb = std::min(minb, pb), maxb = std::max(maxb, pb);
      }
      const double scale = norm(axis);
      const double penetration = std::min(maxa, maxb) - std::max(mina, minb);
      if (penetration <= tol * scale) return false;
    }
  }
  return true;
}

namespace {

double segment_point_dist(Point a, Point b, Point p) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return dist(a, p);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist({a.x + t * ab.x, a.y + t * ab.y}, p);
}

}  // namespace

bool segments_intersect(Point a0, Point a1, Point b0, Point b1, double tol) {
  const double o1 = cross(a1 - a0, b0 - a0);
  const double o2 = cross(a1 - a0, b1 - a0);
  const double o3 = cross(b1 - b0, a0 - b0);
  const double o4 = cross(b1 - b0, a1 - b0);
  if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
      o4 != 0)
    return true;  // proper crossing
  const double d = std::min({segment_point_dist(a0, a1, b0), segment_point_dist(a0, a1, b1),
                             segment_point_dist(b0, b1, a0), segment_point_dist(b0, b1, a1)});
  return d <= tol;
}

}  // namespace homext
