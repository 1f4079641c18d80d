#include "homext/disk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace homext {

namespace {
constexpr double kPi = std::numbers::pi;
}

CircleCover cover_circle() {
  CircleCover cover;
  for (int i = 0; i < 4; ++i) {
    CircleArc arc;
    arc.theta0 = i * (kPi / 2.0);
    arc.theta1 = (i + 1) * (kPi / 2.0);
    arc.chord0 = {std::cos(arc.theta0), std::sin(arc.theta0)};
    arc.chord1 = {std::cos(arc.theta1), std::sin(arc.theta1)};
    cover.arcs[static_cast<size_t>(i)] = arc;
  }
  return cover;
}

SegmentChart::SegmentChart(double a0, double a1) : a0_(a0), a1_(a1) {
  if (!(a1 > a0 && a1 - a0 < 2.0 * kPi))
    fail(errc::invalid_parameter, "segment chart needs an arc of span in (0, 2*pi)");
  c0_ = {std::cos(a0), std::sin(a0)};
  c1_ = {std::cos(a1), std::sin(a1)};
}

Point SegmentChart::arc_point(double x) const {
  const double a = a0_ + (x + 1.0) * 0.5 * (a1_ - a0_);
  return {std::cos(a), std::sin(a)};
}

Point SegmentChart::chord_point(double x) const {
  const double f = (x + 1.0) * 0.5;
  return c0_ + f * (c1_ - c0_);
}

Point SegmentChart::to_segment(Point t) const {
  const double roof = 1.0 - std::abs(t.x);
  const double r = roof > 0.0 ? std::clamp(t.y / roof, 0.0, 1.0) : 0.0;
  const Point a = arc_point(t.x);
  const Point c = chord_point(t.x);
  return (1.0 - r) * a + r * c;
}

Point SegmentChart::from_segment(Point q) const {
  // The fibers arc_point(x) -> chord_point(x) sweep monotonically in x; find
  // the one through q by bisection on the fiber side test.
  auto side = [&](double x) {
    const Point a = arc_point(x);
    const Point c = chord_point(x);
    return cross(c - a, q - a);
  };
  double lo = -1.0, hi = 1.0;
  const double s_mid = side(0.0);
  const bool increasing = side(1.0 - 1e-9) > side(-1.0 + 1e-9);
  (void)s_mid;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = side(mid);
    if ((s > 0.0) == increasing) hi = mid;
    else lo = mid;
  }
  const double x = 0.5 * (lo + hi);
  const Point a = arc_point(x);
  const Point c = chord_point(x);
  const Point f = c - a;
  const double len2 = dot(f, f);
  const double r = len2 > 0.0 ? std::clamp(dot(q - a, f) / len2, 0.0, 1.0) : 0.0;
  return {x, r * (1.0 - std::abs(x))};
}

DiskExtension::DiskExtension(CircleMap phi, int depth, int diagnostic_grid, std::uint64_t seed)
    : phi_(std::move(phi)), depth_(depth) {
  if (!phi_.orientation_preserving())
    fail(errc::invalid_parameter, "disk assembly needs an orientation-preserving circle map");
  for (int i = 0; i < 4; ++i) {
    const double t0 = i * (kPi / 2.0), t1 = (i + 1) * (kPi / 2.0);
    src_charts_[static_cast<size_t>(i)] = std::make_unique<SegmentChart>(t0, t1);
    img_charts_[static_cast<size_t>(i)] =
        std::make_unique<SegmentChart>(phi_.lift(t0), phi_.lift(t1));
    meshes_[static_cast<size_t>(i)] =
        std::make_unique<ExtensionMesh>(phi_.arc_restriction(i), depth);
    const double a = phi_.lift(t0);
    image_corners_[static_cast<size_t>(i)] = {std::cos(a), std::sin(a)};
  }

  // Diagnostics: boundary trace, chart round trips, Jacobian signs on the
  // segments and the central square, sampled central overlap test.
  std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dULL);
  auto uniform = [&]() { return double(rng() >> 11) * 0x1.0p-53; };

  for (int i = 0; i < 4; ++i) {
    const SegmentChart& chart = *src_charts_[static_cast<size_t>(i)];
    for (int k = 1; k < 40; ++k) {
      const double x = -1.0 + 2.0 * k / 40.0;
      const Point on_arc = chart.arc_point(x);
      const double theta = std::atan2(on_arc.y, on_arc.x);
      const double target = phi_.angle_image(theta);
      const Point mapped = eval_segment(i, on_arc);
      const double err = dist(mapped, {std::cos(target), std::sin(target)});
      diag_.max_boundary_trace_error = std::max(diag_.max_boundary_trace_error, err);

      const Point inside = chart.to_segment({x, 0.25 * (1.0 - std::abs(x))});
      const Point rt = chart.to_segment(chart.from_segment(inside));
      diag_.max_chart_roundtrip_error = std::max(diag_.max_chart_roundtrip_error, dist(rt, inside));
    }
    // Jacobian sign of the composed segment map by central differences.
    const int g = diagnostic_grid / 2;
    for (int ix = 1; ix < g; ++ix) {
      for (int iy = 1; iy < g; ++iy) {
        const double x = -1.0 + 2.0 * ix / g;
        const double y = (1.0 - std::abs(x)) * iy / g;
        if (y <= 0.0) continue;
        const Point base = src_charts_[static_cast<size_t>(i)]->to_segment({x, y});
        const double h = 1e-5;
        const Point fx = eval_segment(i, base + Point{h, 0.0});
        const Point bx = eval_segment(i, base - Point{h, 0.0});
        const Point fy = eval_segment(i, base + Point{0.0, h});
        const Point by = eval_segment(i, base - Point{0.0, h});
        const double jac = cross(0.5 / h * (fx - bx), 0.5 / h * (fy - by));
        if (!(jac > 0.0)) ++diag_.segment_jacobian_violations;
      }
    }
  }

  // Central square: Coons patch Jacobian and sampled overlap of mapped quads.
  const int g = diagnostic_grid;
  std::vector<Point> nodes(static_cast<size_t>((g + 1) * (g + 1)));
  for (int iu = 0; iu <= g; ++iu)
    for (int iv = 0; iv <= g; ++iv) {
      const double u = double(iu) / g, v = double(iv) / g;
      // central square point with coordinates (u,v)
      const Point p{1.0 - u - v, u - v};
      nodes[static_cast<size_t>(iu * (g + 1) + iv)] = eval_central(p);
    }
  auto node = [&](int iu, int iv) { return nodes[static_cast<size_t>(iu * (g + 1) + iv)]; };
  std::vector<Triangle> quads;
  for (int iu = 0; iu < g; ++iu)
    for (int iv = 0; iv < g; ++iv) {
      const Point q00 = node(iu, iv), q10 = node(iu + 1, iv), q11 = node(iu + 1, iv + 1),
                  q01 = node(iu, iv + 1);
      const double a1 = signed_area(q00, q10, q11);
      const double a2 = signed_area(q00, q11, q01);
      if (!(a1 > 0.0 && a2 > 0.0)) {
        ++diag_.central_jacobian_violations;
        continue;
      }
      quads.emplace_back(q00, q10, q11);
      quads.emplace_back(q00, q11, q01);
    }
  for (int s = 0; s < 2000 && quads.size() > 4; ++s) {
    const auto i = static_cast<size_t>(uniform() * double(quads.size()));
    const auto j = static_cast<size_t>(uniform() * double(quads.size()));
    if (i == j || i >= quads.size() || j >= quads.size()) continue;
    if (i / 2 == j / 2) continue;  // same quad
    // Neighbouring cells legitimately share edges; require real penetration.
    if (triangles_overlap(quads[i], quads[j], 1e-9)) ++diag_.central_overlap_violations;
  }

  diag_.central_injective =
      diag_.central_jacobian_violations == 0 && diag_.central_overlap_violations == 0;

  // Chord agreement between central Coons boundary and the segment maps.
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k <= 16; ++k) {
      const double u = double(k) / 16.0;
      const CircleArc arc = cover_circle().arcs[static_cast<size_t>(i)];
      const Point q = arc.chord0 + u * (arc.chord1 - arc.chord0);
      diag_.max_chord_mismatch =
          std::max(diag_.max_chord_mismatch, dist(chord_trace(i, u), eval_segment(i, q)));
    }

  diag_.passed = diag_.central_injective && diag_.segment_jacobian_violations == 0 &&
                 diag_.max_boundary_trace_error < 1e-6 && diag_.max_chord_mismatch < 1e-6;
  if (!diag_.central_injective)
    fail(errc::injectivity_check_failed,
         "central-region map failed the numerical injectivity check (" +
             std::to_string(diag_.central_jacobian_violations) + " jacobian, " +
             std::to_string(diag_.central_overlap_violations) + " overlap violations)");
}

Point DiskExtension::eval_segment(int i, Point p) const {
  const Point t = src_charts_[static_cast<size_t>(i)]->from_segment(p);
  const Point ht = meshes_[static_cast<size_t>(i)]->eval(t);
  return img_charts_[static_cast<size_t>(i)]->to_segment(ht);
}

Point DiskExtension::chord_trace(int i, double u) const {
  // The chord is the roof of T under the source chart; its image under the
  // triangle map composed with the image chart is the glued trace.
  const double x = -1.0 + 2.0 * u;
  const Point roof{x, 1.0 - std::abs(x)};
  const Point ht = meshes_[static_cast<size_t>(i)]->eval(roof);
  return img_charts_[static_cast<size_t>(i)]->to_segment(ht);
}

Point DiskExtension::eval_central(Point p) const {
  // Square coordinates: p = e0 + u(e1-e0) + v(e3-e0) with e_i the arc corners.
  const double u = 0.5 * (1.0 - p.x + p.y);
  const double v = 0.5 * (1.0 - p.x - p.y);
  const double uc = std::clamp(u, 0.0, 1.0), vc = std::clamp(v, 0.0, 1.0);
  const Point cb = chord_trace(0, uc);
  const Point ct = chord_trace(2, 1.0 - uc);
  const Point cl = chord_trace(3, 1.0 - vc);
  const Point cr = chord_trace(1, vc);
  const Point p00 = image_corners_[0], p10 = image_corners_[1], p11 = image_corners_[2],
              p01 = image_corners_[3];
  Point out = (1.0 - vc) * cb + vc * ct + (1.0 - uc) * cl + uc * cr;
  out = out - ((1.0 - uc) * (1.0 - vc) * p00 + uc * (1.0 - vc) * p10 + uc * vc * p11 +
               (1.0 - uc) * vc * p01);
  return out;
}

Point DiskExtension::eval(Point p) const {
  if (norm(p) > 1.0 + 1e-12) fail(errc::out_of_domain, "point outside the closed unit disk");
  // Segment i lies beyond its chord line x_i + y_i >= ... : test via the
  // outward chord normal.
  for (int i = 0; i < 4; ++i) {
    const CircleArc arc = cover_circle().arcs[static_cast<size_t>(i)];
    const Point mid = 0.5 * (arc.chord0 + arc.chord1);
    const double off = dot(mid, mid);  // = 1/2 for quarter chords
    if (dot(p, mid) >= off) return eval_segment(i, p);
  }
  return eval_central(p);
}

}  // namespace homext
