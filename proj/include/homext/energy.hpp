#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homext/dyadic.hpp"

namespace homext {

/// Weighted-energy parameters; requires 1 <= p < 2 and p*beta < 1 (beta may
/// be zero or negative).
struct EnergyParams {
  double p;
  double beta;

  EnergyParams(double p_, double beta_) : p(p_), beta(beta_) {
    if (!(std::isfinite(p) && std::isfinite(beta) && p >= 1.0 && p < 2.0 && p * beta < 1.0))
      fail(errc::invalid_parameter, "energy params need 1 <= p < 2 and p*beta < 1");
  }
  double s() const { return p * beta; }          // weight exponent
  double q() const { return p * (1.0 - beta); }  // series exponent p - p*beta
};

/// Exact weighted energy of one cell: the map is affine on each triangle, so
/// the integrand splits into |DH|^p times the pullback weight Im(H(z))^{-s}
/// with an affine Im(H(z)); both factors integrate in closed form.
double cell_energy(const PentagonCell& cell, const EnergyParams& params);

/// C-free majorant L^{2-p} (|I'_k|^{p-p*beta} + |I'_{k+1}|^{p-p*beta}) with
/// L the source interval length; the implied constant is a measured
/// quantity, never asserted.
double cell_energy_bound(const PentagonCell& cell, const EnergyParams& params);

struct GenerationEnergy {
  int j = 0;
  std::int64_t cells = 0;
  double exact_sum = 0.0;   // sum of cell energies in generation j
  double bound_term = 0.0;  // 2^{-j(2-p)} * sum_k |I'_{k,j}|^{p(1-beta)}
};

struct EnergyReport {
  EnergyParams params;
  int depth = 0;
  std::vector<GenerationEnergy> per_generation;
  double partial_total = 0.0;  // sum over generations 0..depth
  double tail_estimate = 0.0;  // geometric extrapolation from the last ratios
  double total = 0.0;          // partial_total + tail_estimate
  double quadrature_check_max_rel = 0.0;  // sampled per-cell quadrature deviation
  std::int64_t quadrature_cells_checked = 0;
  std::vector<double> series_bound_partial;
  std::string regime;  // "total-length" (p(1-beta) >= 1) or "hoelder"
};

/// Per-generation exact energies of the mesh with a sampled quadrature
/// cross-check.  Summation order is fixed (per generation, ascending k,
/// pairwise-tree reduction) so totals are reproducible.
EnergyReport mesh_energy(const ExtensionMesh& mesh, const EnergyParams& params,
                         double quad_sample_fraction = 0.01, std::uint64_t seed = 0);

struct SeriesTerm {
  int j = 0;
  double term = 0.0;      // 2^{-j(2-p)} sum_k |I'_{k,j}|^{p(1-beta)}
  double majorant = 0.0;  // closed regime majorant for this generation
  double partial = 0.0;   // running sum of `term`
};

struct SeriesBound {
  std::vector<SeriesTerm> terms;
  std::string regime;
  double q = 0.0;
};

/// The dyadic series of the construction with its per-regime closed
/// majorant: for p(1-beta) >= 1 the total-length bound 2^{-j(2-p)} 2^{p(1-beta)},
/// otherwise the Hoelder bound 2^{p(1-beta)} 2^{-j(1-p*beta)}.
SeriesBound series_bound(const MonotoneMap& phi, const EnergyParams& params, int depth);

/// Certified upper bound C^p * E_{p,beta}[H] for the unweighted W^{1,p}
/// energy of the composition with a gradient profile |DF| <= C/(1-|x|)^{1-alpha};
/// requires beta = 1 - alpha in the report's parameters.
double composition_energy_bound(const EnergyReport& report, double profile_constant, double alpha,
                                double p);

/// Closed-form limit of the identity-map energy on T:
/// 2*(1/(1-p*beta) - 1/(2-p*beta)).
double identity_energy_limit(const EnergyParams& params);

}  // namespace homext
