#pragma once

#include <array>
#include <memory>

#include "homext/dyadic.hpp"

namespace homext {

struct CircleArc {
  double theta0 = 0.0, theta1 = 0.0;  // quarter arc, theta1 = theta0 + pi/2
  Point chord0, chord1;               // arc endpoints = chord endpoints
};

struct CircleCover {
  std::array<CircleArc, 4> arcs;
  // Central region is the square with vertices (1,0),(0,1),(-1,0),(0,-1).
  double central_area = 2.0;
};

/// Four equal arcs with endpoints at angles 0, pi/2, pi, 3pi/2 and the
/// circular-segment regions over them.
CircleCover cover_circle();

/// Fixed bilipschitz chart between the reference triangle T and the circular
/// segment over an arc [a0,a1] of the unit circle (span < 2*pi): the arc
/// corresponds to the base of T proportionally in angle, the chord to the
/// legs proportionally in length, interior by straight fibers between them.
class SegmentChart {
 public:
  SegmentChart(double a0, double a1);

  Point to_segment(Point t) const;    // T -> circular segment
  Point from_segment(Point q) const;  // circular segment -> T (bisection on fibers)
  Point arc_point(double x) const;    // base coordinate -> point on the arc
  Point chord_point(double x) const;  // base coordinate -> point on the chord

 private:
  double a0_, a1_;
  Point c0_, c1_;
};

struct DiskDiagnostics {
  double max_boundary_trace_error = 0.0;   // |M_i(arc pt) - phi(arc pt)| over samples
  double max_chart_roundtrip_error = 0.0;  // chart inverse consistency
  double max_chord_mismatch = 0.0;         // central map vs segment maps on shared chords
  int segment_jacobian_violations = 0;
  int central_jacobian_violations = 0;
  int central_overlap_violations = 0;
  bool central_injective = false;
  bool passed = false;
};

/// The assembled extension of a circle homeomorphism: the four circular
/// segments carry conjugated triangle extensions, the central square a
/// Coons-type interpolation of the four induced chord traces.  Injectivity
/// of the central map is checked numerically, not guaranteed; assembly
/// throws InjectivityCheckFailed when the check fails.
class DiskExtension {
 public:
  DiskExtension(CircleMap phi, int depth, int diagnostic_grid = 24, std::uint64_t seed = 0);

  Point eval(Point p) const;
  const DiskDiagnostics& diagnostics() const { return diag_; }
  const CircleMap& boundary_map() const { return phi_; }

 private:
  Point eval_segment(int i, Point p) const;
  Point eval_central(Point p) const;
  Point chord_trace(int i, double u) const;  // image of chord_i at fraction u

  CircleMap phi_;
  int depth_;
  std::array<std::unique_ptr<SegmentChart>, 4> src_charts_;
  std::array<std::unique_ptr<SegmentChart>, 4> img_charts_;
  std::array<std::unique_ptr<ExtensionMesh>, 4> meshes_;
  std::array<Point, 4> image_corners_;
  DiskDiagnostics diag_;
};

}  // namespace homext
