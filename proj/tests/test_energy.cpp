#include "homext/energy.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace homext;

namespace {

// Independent oracle: energy of one cell by adaptive quadrature of
// |DH|^p * Im(H(z))^{-p beta} over each source triangle.
double cell_energy_oracle(const PentagonCell& cell, const EnergyParams& params) {
  double total = 0.0;
  for (int i = 0; i < cell.triangle_count; ++i) {
    const AffineMap m = cell.maps[size_t(i)];
    const Triangle t = cell.source_triangle(i);
    const double grad = std::pow(operator_norm(m), params.p);
    total += grad * oracle::adaptive_triangle(
                        [&](Point z) { return std::pow(m(z).y, -params.s()); }, t.v(0), t.v(1),
                        t.v(2), 1e-12);
  }
  return total;
}

}  // namespace

TEST_CASE("energy params validation") {
  CHECK_NOTHROW(EnergyParams(1.0, 0.5));
  CHECK_NOTHROW(EnergyParams(1.9, 0.52));   // p*beta = 0.988 < 1
  CHECK_NOTHROW(EnergyParams(1.5, -1.0));   // beta may be negative
  CHECK_THROWS_AS(EnergyParams(2.0, 0.0), error);
  CHECK_THROWS_AS(EnergyParams(0.9, 0.0), error);
  CHECK_THROWS_AS(EnergyParams(1.6, 0.625), error);  // p*beta = 1
}

TEST_CASE("cell energy: identity generation-0 cell") {
  const PentagonCell cell = build_cell(DyadicInterval(0, 1), MonotoneMap::identity());
  SUBCASE("p=1, beta=0 gives the cell area 1/4") {
    CHECK(cell_energy(cell, EnergyParams(1.0, 0.0)) == 0.25);
  }
  SUBCASE("p=1, beta=1/2 matches the 1-D reduction over the apex triangle") {
    // Width of the triangle ((0,1),(-1/2,1/2),(1/2,1/2)) at height y is 2(1-y):
    // integral_{1/2}^{1} y^{-1/2} 2(1-y) dy = [4 sqrt(y) - (4/3) y^{3/2}].
    const double expected =
        (4.0 - 4.0 / 3.0) - (4.0 * std::sqrt(0.5) - (4.0 / 3.0) * std::pow(0.5, 1.5));
    const double got = cell_energy(cell, EnergyParams(1.0, 0.5));
    CHECK(got == doctest::Approx(expected).epsilon(1e-13));
    CHECK(got == doctest::Approx(cell_energy_oracle(cell, EnergyParams(1.0, 0.5))).epsilon(1e-10));
  }
}

TEST_CASE("cell energy matches the quadrature oracle for singular maps") {
  oracle::Rng rng(404);
  const MonotoneMap phis[] = {MonotoneMap::cantor(0.15), MonotoneMap::power(4.0)};
  for (const auto& phi : phis) {
    for (int it = 0; it < 12; ++it) {
      const int j = 1 + int(rng.below(6));
      const std::int64_t k = 1 + rng.below(std::int64_t{1} << j);
      const PentagonCell cell = build_cell(DyadicInterval(j, k), phi);
      const EnergyParams params(1.0 + 0.8 * rng.uniform(), rng.uniform(-0.4, 0.6) / 2.0);
      const double exact = cell_energy(cell, params);
      CHECK(exact == doctest::Approx(cell_energy_oracle(cell, params)).epsilon(1e-8));
    }
  }
}

TEST_CASE("mesh energy: identity calibration") {
  SUBCASE("p=1, beta=0: partial total is the covered area, exactly") {
    const ExtensionMesh mesh(MonotoneMap::identity(), 10);
    const EnergyReport rep = mesh_energy(mesh, EnergyParams(1.0, 0.0), 0.0);
    CHECK(rep.partial_total == doctest::Approx(1.0 - mesh.source_residual_area()).epsilon(1e-14));
    CHECK(rep.total == doctest::Approx(1.0).epsilon(1e-5));  // extrapolation error ~ 4^{-J}
  }
  SUBCASE("p=1, beta=1/2 converges to 8/3") {
    const ExtensionMesh mesh(MonotoneMap::identity(), 12);
    const EnergyReport rep = mesh_energy(mesh, EnergyParams(1.0, 0.5), 0.0);
    CHECK(rep.total == doctest::Approx(8.0 / 3.0).epsilon(1e-4));
    CHECK(rep.partial_total < rep.total);
  }
  SUBCASE("closed-form limit helper") {
    CHECK(identity_energy_limit(EnergyParams(1.0, 0.5)) == doctest::Approx(8.0 / 3.0));
    CHECK(identity_energy_limit(EnergyParams(1.0, 0.0)) == doctest::Approx(1.0));
  }
  SUBCASE("identity calibration at J = 14 across parameter pairs") {
    const ExtensionMesh mesh(MonotoneMap::identity(), 14);
    for (const auto& pb :
         {std::pair<double, double>{1.0, 0.0}, {1.0, 0.5}, {1.5, 0.3}, {1.9, 0.4}}) {
      const EnergyParams params(pb.first, pb.second);
      const EnergyReport rep = mesh_energy(mesh, params, 0.0);
      const double limit = identity_energy_limit(params);
      CHECK(std::abs(rep.total - limit) / limit <= 1e-3);
    }
  }
}

TEST_CASE("mesh energy: quadrature cross-check and per-generation structure") {
  const ExtensionMesh mesh(MonotoneMap::cantor(1.0 / 3.0), 6);
  const EnergyReport rep = mesh_energy(mesh, EnergyParams(1.5, 0.3), 1.0, 5);  // check all cells
  CHECK(rep.quadrature_cells_checked == mesh.cell_count());
  CHECK(rep.quadrature_check_max_rel <= 1e-8);
  CHECK(rep.per_generation.size() == 7);
  double sum = 0.0;
  bool nonneg = true;
  for (const auto& g : rep.per_generation) {
    nonneg = nonneg && g.exact_sum >= 0.0;
    sum += g.exact_sum;
  }
  CHECK(nonneg);
  CHECK(sum == doctest::Approx(rep.partial_total).epsilon(1e-12));
  bool nondec = true;
  for (size_t i = 1; i < rep.series_bound_partial.size(); ++i)
    nondec = nondec && rep.series_bound_partial[i] >= rep.series_bound_partial[i - 1];
  CHECK(nondec);
}

TEST_CASE("per-generation sums decay geometrically for a singular map") {
  const ExtensionMesh mesh(MonotoneMap::cantor(1.0 / 3.0), 12);
  const EnergyReport rep = mesh_energy(mesh, EnergyParams(1.5, 0.3), 0.0);
  bool decaying = true;
  for (size_t j = 4; j < rep.per_generation.size(); ++j)
    decaying = decaying &&
               rep.per_generation[j].exact_sum < 0.95 * rep.per_generation[j - 1].exact_sum;
  CHECK(decaying);
}

TEST_CASE("cell energy bound") {
  SUBCASE("identity cells: bound is 2*4^{1-j}") {
    for (int j : {1, 2, 3, 5}) {
      const PentagonCell cell = build_cell(DyadicInterval(j, 1), MonotoneMap::identity());
      const double bound = cell_energy_bound(cell, EnergyParams(1.0, 0.0));
      CHECK(bound == doctest::Approx(2.0 * std::pow(4.0, 1 - j)).epsilon(1e-13));
    }
  }
  SUBCASE("bound is positive and dominates energy with a stable constant") {
    oracle::Rng rng(71);
    double max_ratio = 0.0;
    bool all_positive = true;
    for (int rep = 0; rep < 10; ++rep) {
      const double theta = rng.uniform(0.15, 0.85);
      const ExtensionMesh mesh(MonotoneMap::cantor(theta), 8);
      const EnergyParams params(1.0 + rng.uniform() * 0.9, rng.uniform() * 0.5);
      for (const auto& row : mesh.generations())
        for (const auto& cell : row) {
          const double bound = cell_energy_bound(cell, params);
          all_positive = all_positive && bound > 0.0;
          max_ratio = std::max(max_ratio, cell_energy(cell, params) / bound);
        }
    }
    CHECK(all_positive);
    CHECK(max_ratio < 100.0);
    CHECK(max_ratio > 0.0);
  }
}

TEST_CASE("series bound") {
  SUBCASE("identity, p=1, beta=0: terms are 2^{1-j} and the sum approaches 4") {
    const SeriesBound sb = series_bound(MonotoneMap::identity(), EnergyParams(1.0, 0.0), 12);
    CHECK(sb.regime == "total-length");
    bool terms_ok = true, majorant_ok = true;
    for (const auto& t : sb.terms) {
      terms_ok = terms_ok && std::abs(t.term - std::ldexp(1.0, 1 - t.j)) <=
                                 1e-12 * std::ldexp(1.0, 1 - t.j);
      majorant_ok = majorant_ok && t.term <= t.majorant * (1.0 + 1e-12);
    }
    CHECK(terms_ok);
    CHECK(majorant_ok);
    CHECK(sb.terms.back().partial == doctest::Approx(4.0 - std::ldexp(1.0, -11)).epsilon(1e-12));
  }
  SUBCASE("regime selection") {
    CHECK(series_bound(MonotoneMap::identity(), EnergyParams(1.5, 0.5), 2).regime == "hoelder");
    CHECK(series_bound(MonotoneMap::identity(), EnergyParams(1.5, 0.1), 2).regime ==
          "total-length");
  }
  SUBCASE("majorants hold term by term for singular maps in both regimes") {
    for (const auto& phi : {MonotoneMap::cantor(0.2), MonotoneMap::power(5.0)}) {
      for (const auto& pb : {std::pair<double, double>{1.5, 0.5}, {1.5, 0.1}, {1.9, 0.52}}) {
        const SeriesBound sb = series_bound(phi, EnergyParams(pb.first, pb.second), 10);
        bool ok = true;
        for (const auto& t : sb.terms) ok = ok && t.term <= t.majorant * (1.0 + 1e-12);
        CHECK(ok);
      }
    }
  }
}

TEST_CASE("domination: mesh energy vs series bound with stable constant") {
  const MonotoneMap phi = MonotoneMap::cantor(1.0 / 3.0);
  const EnergyParams params(1.5, 0.3);
  std::vector<double> constants;
  for (int depth : {6, 8, 10, 12}) {
    const ExtensionMesh mesh(phi, depth);
    const EnergyReport rep = mesh_energy(mesh, params, 0.0);
    constants.push_back(rep.partial_total / rep.series_bound_partial.back());
  }
  for (double c : constants) {
    CHECK(c > 0.0);
    CHECK(std::abs(c / constants.back() - 1.0) <= 0.2);
  }
}

TEST_CASE("parameter-boundary divergence: identity energy blows up like 1/(1-p*beta)") {
  for (double pb : {0.9, 0.99}) {
    const EnergyParams params(1.0, pb);
    const ExtensionMesh mesh(MonotoneMap::identity(), 12);
    const EnergyReport rep = mesh_energy(mesh, params, 0.0);
    const double model = 2.0 / (1.0 - pb);
    CHECK(rep.total / model > 0.5);
    CHECK(rep.total / model < 2.0);
  }
}

TEST_CASE("composition energy bound") {
  const ExtensionMesh mesh(MonotoneMap::identity(), 6);
  SUBCASE("alpha=1 (Lipschitz profile) passes the total through") {
    const EnergyReport rep = mesh_energy(mesh, EnergyParams(1.0, 0.0), 0.0);
    CHECK(composition_energy_bound(rep, 1.0, 1.0, 1.0) == rep.total);
    CHECK(composition_energy_bound(rep, 2.0, 1.0, 1.0) == 2.0 * rep.total);
  }
  SUBCASE("alpha=0.6, p=1.9 is accepted with beta=0.4") {
    const EnergyReport rep = mesh_energy(mesh, EnergyParams(1.9, 0.4), 0.0);
    const double b = composition_energy_bound(rep, 3.0, 0.6, 1.9);
    CHECK(b == doctest::Approx(std::pow(3.0, 1.9) * rep.total).epsilon(1e-14));
  }
  SUBCASE("beta mismatch is rejected") {
    const EnergyReport rep = mesh_energy(mesh, EnergyParams(1.9, 0.3), 0.0);
    CHECK_THROWS_AS(composition_energy_bound(rep, 1.0, 0.6, 1.9), error);
    try {
      composition_energy_bound(rep, 1.0, 0.6, 1.9);
    } catch (const error& e) {
      CHECK(e.code() == errc::param_mismatch);
    }
  }
  SUBCASE("alpha out of range is rejected") {
    const EnergyReport rep = mesh_energy(mesh, EnergyParams(1.0, 0.5), 0.0);
    CHECK_THROWS_AS(composition_energy_bound(rep, 1.0, 0.5, 1.0), error);
  }
}
