#include "homext/energy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace homext {

namespace {

// Pairwise-tree reduction; deterministic and stable for long generation sums.
double pairwise_sum(std::vector<double>& v) {
  if (v.empty()) return 0.0;
  size_t n = v.size();
  while (n > 1) {
    size_t m = 0;
    for (size_t i = 0; i + 1 < n; i += 2) v[m++] = v[i] + v[i + 1];
    if (n % 2 == 1) v[m++] = v[n - 1];
    n = m;
  }
  return v[0];
}

AffineScalar image_height_functional(const AffineMap& m) {
  return AffineScalar{m.m10, m.m11, m.offset.y};
}

}  // namespace

double cell_energy(const PentagonCell& cell, const EnergyParams& params) {
  const double s = params.s();
  double total = 0.0;
  for (int i = 0; i < cell.triangle_count; ++i) {
    const AffineMap& m = cell.maps[static_cast<size_t>(i)];
    const double grad = std::pow(operator_norm(m), params.p);
    total += grad * weighted_triangle_integral(cell.source_triangle(i),
                                               image_height_functional(m), s);
  }
  return total;
}

double cell_energy_bound(const PentagonCell& cell, const EnergyParams& params) {
  const double L = cell.interval.length();
  const double q = params.q();
  double b = std::pow(cell.image_interval_length(), q);
  if (!cell.is_last) b += std::pow(cell.next_image_interval_length(), q);
  return std::pow(L, 2.0 - params.p) * b;
}

namespace {

// Production-side quadrature self-check (midpoint rule + uniform refinement);
// the testing oracle lives in the test tree and is independent of this.
double quad_triangle(const AffineScalar& w, double s, Point v0, Point v1, Point v2, double tol,
                     int depth) {
  const Point m01{0.5 * (v0.x + v1.x), 0.5 * (v0.y + v1.y)};
  const Point m12{0.5 * (v1.x + v2.x), 0.5 * (v1.y + v2.y)};
  const Point m20{0.5 * (v2.x + v0.x), 0.5 * (v2.y + v0.y)};
  const double area = std::abs(signed_area(v0, v1, v2));
  auto f = [&](Point p) { return std::pow(w(p), -s); };
  const double coarse = area / 3.0 * (f(m01) + f(m12) + f(m20));
  const Point c0[3] = {v0, m01, m20}, c1[3] = {m01, v1, m12}, c2[3] = {m20, m12, v2},
              c3[3] = {m01, m12, m20};
  double fine = 0.0;
  for (const Point* t : {c0, c1, c2, c3}) {
    const Point a = t[0], b = t[1], c = t[2];
    const Point n01{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    const Point n12{0.5 * (b.x + c.x), 0.5 * (b.y + c.y)};
    const Point n20{0.5 * (c.x + a.x), 0.5 * (c.y + a.y)};
    fine += area / 12.0 * (f(n01) + f(n12) + f(n20));
  }
  if (depth > 24 || std::abs(fine - coarse) <= tol * std::abs(fine)) return fine;
  double sum = 0.0;
  for (const Point* t : {c0, c1, c2, c3})
    sum += quad_triangle(w, s, t[0], t[1], t[2], tol, depth + 1);
  return sum;
}

double cell_energy_quadrature(const PentagonCell& cell, const EnergyParams& params) {
  double total = 0.0;
  for (int i = 0; i < cell.triangle_count; ++i) {
    const AffineMap& m = cell.maps[static_cast<size_t>(i)];
    const Triangle t = cell.source_triangle(i);
    total += std::pow(operator_norm(m), params.p) *
             quad_triangle(image_height_functional(m), params.s(), t.v(0), t.v(1), t.v(2), 1e-10, 0);
  }
  return total;
}

}  // namespace

EnergyReport mesh_energy(const ExtensionMesh& mesh, const EnergyParams& params,
                         double quad_sample_fraction, std::uint64_t seed) {
  EnergyReport rep{params, mesh.depth(), {}, 0.0, 0.0, 0.0, 0.0, 0, {}, {}};
  rep.regime = params.q() >= 1.0 ? "total-length" : "hoelder";

  std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ULL);
  const auto sample_every =
      quad_sample_fraction > 0.0
          ? std::max<std::uint64_t>(1, static_cast<std::uint64_t>(1.0 / quad_sample_fraction))
          : 0;

  std::vector<double> gen_terms;
  std::vector<double> cell_values;
  for (const auto& row : mesh.generations()) {
    GenerationEnergy ge;
    ge.j = row.front().interval.j;
    ge.cells = static_cast<std::int64_t>(row.size());
    cell_values.clear();
    cell_values.reserve(row.size());
    double series = 0.0;
    for (const PentagonCell& c : row) {
      const double e = cell_energy(c, params);
      cell_values.push_back(e);
      series += std::pow(c.image_interval_length(), params.q());
      if (sample_every != 0 && rng() % sample_every == 0) {
        const double qv = cell_energy_quadrature(c, params);
        const double rel = std::abs(qv - e) / std::max(std::abs(e), 1e-300);
        rep.quadrature_check_max_rel = std::max(rep.quadrature_check_max_rel, rel);
        ++rep.quadrature_cells_checked;
      }
    }
    ge.exact_sum = pairwise_sum(cell_values);
    ge.bound_term = std::pow(2.0, -double(ge.j) * (2.0 - params.p)) * series;
    rep.per_generation.push_back(ge);
    gen_terms.push_back(ge.exact_sum);
  }

  double partial = 0.0;
  for (double e : gen_terms) partial += e;
  rep.partial_total = partial;

  // Geometric tail extrapolation from the final inter-generation ratio.  The
  // per-generation sums of this construction decay geometrically, so
  // partial + e_J * r/(1-r) converges far faster than the raw partial sums.
  rep.tail_estimate = 0.0;
  const size_t n = gen_terms.size();
  if (n >= 2 && gen_terms[n - 1] > 0.0 && gen_terms[n - 2] > 0.0) {
    const double r = gen_terms[n - 1] / gen_terms[n - 2];
    if (r > 0.0 && r < 1.0) rep.tail_estimate = gen_terms[n - 1] * r / (1.0 - r);
  }
  rep.total = rep.partial_total + rep.tail_estimate;

  double running = 0.0;
  for (const auto& ge : rep.per_generation) {
    running += ge.bound_term;
    rep.series_bound_partial.push_back(running);
  }
  return rep;
}

SeriesBound series_bound(const MonotoneMap& phi, const EnergyParams& params, int depth) {
  if (depth < 0) fail(errc::invalid_parameter, "depth must be nonnegative");
  SeriesBound sb;
  sb.q = params.q();
  sb.regime = sb.q >= 1.0 ? "total-length" : "hoelder";
  double partial = 0.0;
  for (int j = 0; j <= depth; ++j) {
    const std::int64_t n = std::int64_t{1} << j;
    double sum_q = 0.0;
    double lo = phi(-1.0);
    for (std::int64_t k = 1; k <= n; ++k) {
      const double hi = phi(DyadicInterval(j, k).b());
      sum_q += std::pow(hi - lo, sb.q);
      lo = hi;
    }
    SeriesTerm t;
    t.j = j;
    t.term = std::pow(2.0, -double(j) * (2.0 - params.p)) * sum_q;
    if (sb.q >= 1.0) {
      t.majorant = std::pow(2.0, -double(j) * (2.0 - params.p)) * std::pow(2.0, sb.q);
    } else {
      t.majorant = std::pow(2.0, sb.q) * std::pow(2.0, -double(j) * (1.0 - params.s()));
    }
    partial += t.term;
    t.partial = partial;
    sb.terms.push_back(t);
  }
  return sb;
}

double composition_energy_bound(const EnergyReport& report, double profile_constant, double alpha,
                                double p) {
  if (!(std::isfinite(profile_constant) && profile_constant > 0.0))
    fail(errc::invalid_parameter, "profile constant must be positive");
  if (!(alpha > 0.5 && alpha <= 1.0))
    fail(errc::invalid_parameter, "Hoelder exponent must satisfy 1/2 < alpha <= 1");
  if (std::abs(report.params.beta - (1.0 - alpha)) > 1e-12)
    fail(errc::param_mismatch, "report was computed with beta != 1 - alpha");
  if (std::abs(report.params.p - p) > 1e-12)
    fail(errc::param_mismatch, "report was computed with a different exponent p");
  return std::pow(profile_constant, p) * report.total;
}

double identity_energy_limit(const EnergyParams& params) {
  const double s = params.s();
  return 2.0 * (1.0 / (1.0 - s) - 1.0 / (2.0 - s));
}

}  // namespace homext
