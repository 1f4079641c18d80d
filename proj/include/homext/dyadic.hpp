#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "homext/boundary_map.hpp"
#include "homext/geometry.hpp"

namespace homext {

/// The reference triangle T = {(x,y): 0 <= y <= 1, y-1 <= x <= 1-y} with
/// vertices (-1,0), (1,0), (0,1) and area 1.
struct ReferenceTriangle {
  static bool contains(Point p, double tol = 0.0) {
    return p.y >= -tol && p.y - 1.0 <= p.x + tol && p.x + p.y <= 1.0 + tol;
  }
  static Triangle triangle() { return Triangle({-1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}); }
};

/// Dyadic interval I_{k,j}: generation j >= 0 splits [-1,1] into 2^j
/// intervals of length 2^{1-j}, indexed k = 1..2^j from the left.
struct DyadicInterval {
  int j = 0;
  std::int64_t k = 1;

  DyadicInterval() = default;
  DyadicInterval(int gen, std::int64_t index);

  double a() const { return endpoint(j, k - 1); }
  double b() const { return endpoint(j, k); }
  double mid() const { return endpoint(j + 1, 2 * k - 1); }
  double length() const { return std::ldexp(1.0, 1 - j); }
  Interval interval() const { return {a(), b()}; }

  std::int64_t count_in_generation() const { return std::int64_t{1} << j; }
  bool is_last() const { return k == count_in_generation(); }
  DyadicInterval left_child() const { return {j + 1, 2 * k - 1}; }
  DyadicInterval right_child() const { return {j + 1, 2 * k}; }
  DyadicInterval right_neighbor() const;

 private:
  // Endpoint of index m in generation g: -1 + m*2^{1-g}, exact in doubles.
  static double endpoint(int g, std::int64_t m) { return -1.0 + std::ldexp(double(m), 1 - g); }
};

/// Apex point V(I): isosceles right triangle over I with the right angle on
/// top, i.e. (midpoint, |I|/2).
Point apex(const Interval& iv);

/// One cell of the construction: the pentagon U (parallelogram X,Y,z,x with
/// the extra point y between x and z) and its image pentagon U', split into
/// three affine triangle maps.  The last interval of a generation yields a
/// triangle-only cell.
struct PentagonCell {
  DyadicInterval interval;
  bool is_last = false;
  // Source points; Y and z are meaningful only when !is_last.
  Point X, Y, z, y, x;
  // Image points under phi (apexes of the image intervals).
  Point Xp, Yp, zp, yp, xp;
  int triangle_count = 0;  // 1 for last cells, 3 otherwise
  std::array<AffineMap, 3> maps{};

  // Counterclockwise source/image triangles; i in [0, triangle_count).
  // 0: (X,x,y)->(X',x',y'), 1: (X,y,Y)->(X',y',Y'), 2: (Y,y,z)->(Y',y',z').
  Triangle source_triangle(int i) const;
  Triangle image_triangle(int i) const;
  double source_area() const;
  double image_area() const;
  double image_interval_length() const { return 2.0 * Xp.y; }
  double next_image_interval_length() const { return is_last ? 0.0 : 2.0 * Yp.y; }
};

PentagonCell build_cell(const DyadicInterval& iv, const MonotoneMap& phi);

/// The full piecewise-affine extension H of phi, built to generation `depth`.
/// Cells of generation j tile the horizontal band 2^{-j-1} <= y <= 2^{-j} of
/// T; the strip below 2^{-depth-1} is resolved on demand by eval().
class ExtensionMesh {
 public:
  ExtensionMesh(MonotoneMap phi, int depth);

  int depth() const { return depth_; }
  const MonotoneMap& boundary_map() const { return phi_; }
  const std::vector<std::vector<PentagonCell>>& generations() const { return cells_; }
  std::int64_t cell_count() const;

  /// Cell containing points of band j at position k; builds on demand for
  /// j > depth.
  PentagonCell cell(int j, std::int64_t k) const;

  /// Locate the (generation, index) of the cell containing P (P.y > 0).
  std::pair<int, std::int64_t> locate(Point p) const;

  /// Evaluate H(P) for P in T.  On the base, H equals phi exactly; below the
  /// resolution floor the image-tent anchor is returned.
  Point eval(Point p) const;

  /// Exact dyadic area of the uncovered strip {0 <= y <= 2^{-depth-1}} of T,
  /// summed from per-interval pieces of generation depth+1.
  double source_residual_area() const;
  /// Area under the generation-(depth+1) image apex polyline (trapezoid sum).
  double image_residual_area() const;

 private:
  MonotoneMap phi_;
  int depth_;
  std::vector<std::vector<PentagonCell>> cells_;
};

struct LegTraceDiagnostics {
  double min_segment_ratio = 0.0;  // image/source length over consecutive leg vertices
  double max_segment_ratio = 0.0;
  double max_displacement = 0.0;  // sup |H(P) - P| over sampled leg vertices
};

struct HomeoReport {
  double min_determinant = 0.0;
  double max_operator_norm = 0.0;
  double max_edge_vertex_mismatch = 0.0;
  double source_area_defect = 0.0;  // |sum of cell areas + residual - 1|, exact arithmetic
  double image_area_defect = 0.0;
  int overlap_violations = 0;     // sampled image-cell interior overlaps
  std::int64_t pairs_tested = 0;
  LegTraceDiagnostics left_leg, right_leg;
  bool orientation_ok = false;
  bool edges_consistent = false;
  bool tilings_ok = false;
  bool passed() const { return orientation_ok && edges_consistent && tilings_ok; }
};

/// Full verification battery: determinant positivity, shared-edge agreement,
/// area bookkeeping on both sides, sampled image-overlap test, and the leg
/// trace diagnostics called for by the construction's boundary behaviour.
HomeoReport check_homeomorphism(const ExtensionMesh& mesh, std::int64_t overlap_samples = 1000,
                                std::uint64_t seed = 0);

}  // namespace homext
