#include "homext/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace homext {

namespace {

constexpr int kMaxStoredDepth = 16;
// Tent diameter 2^{1-j} drops below the evaluation floor 1e-12 past here.
constexpr int kEvalFloorGeneration = 42;

}  // namespace

DyadicInterval::DyadicInterval(int gen, std::int64_t index) : j(gen), k(index) {
  if (gen < 0 || index < 1 || index > (std::int64_t{1} << std::min(gen, 62)))
    fail(errc::out_of_domain, "dyadic index (j,k) out of range");
}

DyadicInterval DyadicInterval::right_neighbor() const {
  if (is_last()) fail(errc::out_of_domain, "last interval of its generation has no right neighbor");
  return {j, k + 1};
}

Point apex(const Interval& iv) {
  if (!(iv.hi > iv.lo)) fail(errc::degenerate_interval, "apex needs a nondegenerate interval");
  return {0.5 * (iv.lo + iv.hi), 0.5 * (iv.hi - iv.lo)};
}

Triangle PentagonCell::source_triangle(int i) const {
  switch (i) {
    case 0: return Triangle(X, x, y);
    case 1: return Triangle(X, y, Y);
    case 2: return Triangle(Y, y, z);
    default: fail(errc::out_of_domain, "triangle index out of range");
  }
}

Triangle PentagonCell::image_triangle(int i) const {
  switch (i) {
    case 0: return Triangle(Xp, xp, yp);
    case 1: return Triangle(Xp, yp, Yp);
    case 2: return Triangle(Yp, yp, zp);
    default: fail(errc::out_of_domain, "triangle index out of range");
  }
}

double PentagonCell::source_area() const {
  double a = 0.0;
  for (int i = 0; i < triangle_count; ++i)
    a += signed_area(source_triangle(i).v(0), source_triangle(i).v(1), source_triangle(i).v(2));
  return a;
}

double PentagonCell::image_area() const {
  double a = 0.0;
  for (int i = 0; i < triangle_count; ++i)
    a += signed_area(image_triangle(i).v(0), image_triangle(i).v(1), image_triangle(i).v(2));
  return a;
}

PentagonCell build_cell(const DyadicInterval& iv, const MonotoneMap& phi) {
  PentagonCell cell;
  cell.interval = iv;
  cell.is_last = iv.is_last();
  cell.triangle_count = cell.is_last ? 1 : 3;

  const double a = iv.a(), m = iv.mid(), b = iv.b();
  const double fa = phi(a), fm = phi(m), fb = phi(b);
  if (!(fa < fm && fm < fb))
    fail(errc::invalid_parameter, "boundary map is not strictly increasing on a dyadic cell");

  cell.X = apex(iv.interval());
  cell.x = apex(iv.left_child().interval());
  cell.y = apex(iv.right_child().interval());
  cell.Xp = apex({fa, fb});
  cell.xp = apex({fa, fm});
  cell.yp = apex({fm, fb});

  if (!cell.is_last) {
    const DyadicInterval nb = iv.right_neighbor();
    const double nm = nb.mid(), nbb = nb.b();
    const double fnm = phi(nm), fnb = phi(nbb);
    if (!(fb < fnm && fnm < fnb))
      fail(errc::invalid_parameter, "boundary map is not strictly increasing on a dyadic cell");
    cell.Y = apex(nb.interval());
    cell.z = apex(nb.left_child().interval());
    cell.Yp = apex({fb, fnb});
    cell.zp = apex({fb, fnm});
  }

  cell.maps[0] = affine_from_vertices({cell.X, cell.x, cell.y}, {cell.Xp, cell.xp, cell.yp});
  if (!cell.is_last) {
    cell.maps[1] = affine_from_vertices({cell.X, cell.y, cell.Y}, {cell.Xp, cell.yp, cell.Yp});
    cell.maps[2] = affine_from_vertices({cell.Y, cell.y, cell.z}, {cell.Yp, cell.yp, cell.zp});
  }
  return cell;
}

ExtensionMesh::ExtensionMesh(MonotoneMap phi, int depth) : phi_(std::move(phi)), depth_(depth) {
  if (depth < 0 || depth > kMaxStoredDepth)
    fail(errc::invalid_parameter, "mesh depth must be in 0.." + std::to_string(kMaxStoredDepth));
  cells_.resize(static_cast<size_t>(depth) + 1);
  for (int j = 0; j <= depth; ++j) {
    const std::int64_t n = std::int64_t{1} << j;
    cells_[static_cast<size_t>(j)].reserve(static_cast<size_t>(n));
    for (std::int64_t k = 1; k <= n; ++k)
      cells_[static_cast<size_t>(j)].push_back(build_cell(DyadicInterval(j, k), phi_));
  }
}

std::int64_t ExtensionMesh::cell_count() const {
  std::int64_t n = 0;
  for (const auto& gen : cells_) n += static_cast<std::int64_t>(gen.size());
  return n;
}

PentagonCell ExtensionMesh::cell(int j, std::int64_t k) const {
  const DyadicInterval iv(j, k);
  if (j <= depth_) return cells_[static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
  return build_cell(iv, phi_);
}

std::pair<int, std::int64_t> ExtensionMesh::locate(Point p) const {
  if (!(p.y > 0.0)) fail(errc::out_of_domain, "locate needs an interior point (y > 0)");
  int e = 0;
  const double f = std::frexp(p.y, &e);  // p.y = f * 2^e, f in [0.5, 1)
  int j = (f == 0.5) ? (1 - e) : -e;
  j = std::max(j, 0);
  if (j > kEvalFloorGeneration) j = kEvalFloorGeneration;
  const double h = std::ldexp(1.0, -j);
  auto k = static_cast<std::int64_t>(std::floor((p.x + 1.0 - p.y) / (2.0 * h))) + 1;
  k = std::clamp<std::int64_t>(k, 1, std::int64_t{1} << j);
  return {j, k};
}

namespace {

// Index of the cell triangle whose edge functions are least violated by p;
// robust against roundoff at shared edges, where the maps agree anyway.
int pick_triangle(const PentagonCell& cell, Point p) {
  if (cell.triangle_count == 1) return 0;
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < cell.triangle_count; ++i) {
    const Triangle t = cell.source_triangle(i);
    const double e0 = cross(t.v(1) - t.v(0), p - t.v(0));
    const double e1 = cross(t.v(2) - t.v(1), p - t.v(1));
    const double e2 = cross(t.v(0) - t.v(2), p - t.v(2));
    const double score = std::min({e0, e1, e2}) / t.area();
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

}  // namespace

Point ExtensionMesh::eval(Point p) const {
  if (!ReferenceTriangle::contains(p, 1e-12)) fail(errc::out_of_domain, "point outside T");
  if (p.y <= 0.0) return {phi_(std::clamp(p.x, -1.0, 1.0)), 0.0};
  const auto [j, k] = locate(p);
  auto tent_anchor = [&](int g) {
    const double len = std::ldexp(1.0, 1 - g);
    auto kk = static_cast<std::int64_t>(std::floor((p.x + 1.0) / len)) + 1;
    kk = std::clamp<std::int64_t>(kk, 1, std::int64_t{1} << g);
    const Interval img = phi_.image(DyadicInterval(g, kk).interval());
    // Image increments can collapse to zero ulps far below the floor.
    return img.hi > img.lo ? apex(img) : Point{img.lo, 0.0};
  };
  if (j >= kEvalFloorGeneration) return tent_anchor(j);
  if (j <= depth_) {
    const PentagonCell& c = cells_[static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
    return c.maps[static_cast<size_t>(pick_triangle(c, p))](p);
  }
  try {
    const PentagonCell c = build_cell(DyadicInterval(j, k), phi_);
    return c.maps[static_cast<size_t>(pick_triangle(c, p))](p);
  } catch (const error&) {
    // phi increments are no longer resolvable in doubles at this depth.
    return tent_anchor(j);
  }
}

double ExtensionMesh::source_residual_area() const {
  const int g = depth_ + 1;
  const double h = std::ldexp(1.0, -g);  // strip height = half interval length
  const double interior = 2.0 * h * h;
  const double end = 1.5 * h * h;
  const std::int64_t n = std::int64_t{1} << g;
  double sum = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) sum += (k == 1 || k == n) ? end : interior;
  return sum;
}

double ExtensionMesh::image_residual_area() const {
  const int g = depth_ + 1;
  const std::int64_t n = std::int64_t{1} << g;
  double sum = 0.0;
  double prev_t = -1.0, prev_h = 0.0;
  double lo = phi_(-1.0);
  for (std::int64_t k = 1; k <= n; ++k) {
    const DyadicInterval iv(g, k);
    const double hi = phi_(iv.b());
    const Point ap = apex({lo, hi});
    sum += 0.5 * (prev_h + ap.y) * (ap.x - prev_t);
    prev_t = ap.x;
    prev_h = ap.y;
    lo = hi;
  }
  sum += 0.5 * prev_h * (1.0 - prev_t);
  return sum;
}

namespace {

void leg_trace(const ExtensionMesh& mesh, bool left, LegTraceDiagnostics* out) {
  const int top = mesh.depth() + 1;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0, max_disp = 0.0;
  Point prev_src, prev_img;
  for (int j = 0; j <= top; ++j) {
    const std::int64_t k = left ? 1 : (std::int64_t{1} << j);
    const DyadicInterval iv(j, k);
    const Point src = apex(iv.interval());
    const Point img = apex(mesh.boundary_map().image(iv.interval()));
    max_disp = std::max(max_disp, dist(src, img));
    if (j > 0) {
      const double r = dist(prev_img, img) / dist(prev_src, src);
      min_ratio = std::min(min_ratio, r);
      max_ratio = std::max(max_ratio, r);
    }
    prev_src = src;
    prev_img = img;
  }
  out->min_segment_ratio = min_ratio;
  out->max_segment_ratio = max_ratio;
  out->max_displacement = max_disp;
}

}  // namespace

HomeoReport check_homeomorphism(const ExtensionMesh& mesh, std::int64_t overlap_samples,
                                std::uint64_t seed) {
  HomeoReport rep;
  rep.min_determinant = std::numeric_limits<double>::infinity();
  double mismatch = 0.0;
  double source_sum = 0.0, image_sum = 0.0;

  const auto& gens = mesh.generations();
  for (size_t j = 0; j < gens.size(); ++j) {
    const auto& row = gens[j];
    for (size_t i = 0; i < row.size(); ++i) {
      const PentagonCell& c = row[i];
      for (int t = 0; t < c.triangle_count; ++t) {
        rep.min_determinant = std::min(rep.min_determinant, c.maps[static_cast<size_t>(t)].det());
        rep.max_operator_norm =
            std::max(rep.max_operator_norm, operator_norm(c.maps[static_cast<size_t>(t)]));
      }
      source_sum += c.source_area();
      image_sum += c.image_area();

      // Horizontal neighbor: our (Y,y,z)->... edge z-Y coincides with its
      // (X,x,y)->... edge x-X.
      if (!c.is_last) {
        const PentagonCell& r = row[i + 1];
        mismatch = std::max({mismatch, dist(c.zp, r.xp), dist(c.Yp, r.Xp),
                             dist(c.maps[2](c.z), r.maps[0](r.x)),
                             dist(c.maps[2](c.Y), r.maps[0](r.X))});
      }
      // Vertical neighbors one generation down share the bottom path
      // x -> y -> z with the next generation's apex points X.
      if (j + 1 < gens.size()) {
        const auto& below = gens[j + 1];
        const PentagonCell& c1 = below[2 * i];
        const PentagonCell& c2 = below[2 * i + 1];
        mismatch = std::max({mismatch, dist(c.xp, c1.Xp), dist(c.yp, c2.Xp)});
        if (!c.is_last) mismatch = std::max(mismatch, dist(c.zp, below[2 * i + 2].Xp));
      }
    }
  }
  rep.max_edge_vertex_mismatch = mismatch;

  rep.source_area_defect = std::abs(source_sum + mesh.source_residual_area() - 1.0);
  rep.image_area_defect = std::abs(image_sum + mesh.image_residual_area() - 1.0);

  // Sampled interior-disjointness of image triangles across distinct cells.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const std::int64_t total = mesh.cell_count();
  auto pick = [&]() -> const PentagonCell* {
    auto idx = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(total));
    for (const auto& row : gens) {
      if (idx < static_cast<std::int64_t>(row.size())) return &row[static_cast<size_t>(idx)];
      idx -= static_cast<std::int64_t>(row.size());
    }
    return &gens.back().back();
  };
  for (std::int64_t s = 0; s < overlap_samples; ++s) {
    const PentagonCell* a = pick();
    const PentagonCell* b = pick();
    if (a == b) continue;
    ++rep.pairs_tested;
    const int ta = static_cast<int>(rng() % static_cast<std::uint64_t>(a->triangle_count));
    const int tb = static_cast<int>(rng() % static_cast<std::uint64_t>(b->triangle_count));
    if (triangles_overlap(a->image_triangle(ta), b->image_triangle(tb), 1e-12))
      ++rep.overlap_violations;
  }

  leg_trace(mesh, true, &rep.left_leg);
  leg_trace(mesh, false, &rep.right_leg);

  rep.orientation_ok = rep.min_determinant > 0.0;
  rep.edges_consistent = rep.max_edge_vertex_mismatch <= 1e-12;
  rep.tilings_ok = rep.source_area_defect == 0.0 && rep.image_area_defect <= 1e-9 &&
                   rep.overlap_violations == 0;
  return rep;
}

}  // namespace homext
