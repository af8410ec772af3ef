#pragma once

#include "cavlat/common.hpp"

#include <span>
#include <string>
#include <vector>

namespace cavlat {

struct Bunching {
  double b0 = 0.0;   // mean cos^2(k z)
  cplx b_plus;       // mean exp(+2 i k z)
  cplx b_minus() const { return std::conj(b_plus); }
};

// Geometry of the atomic stack in phase units. Site n (0-based) has the
// integer index j = n - (n_sites - 1) / 2 and sits at phase
// j * site_phase + z0_phase.
struct LatticeConfig {
  int n_sites = 1;
  double site_phase = kPi;   // k lambda_lat / 2
  double z0_phase = 0.0;     // k z0
  double kzbar = 0.0;        // thermal width k zbar
  std::vector<double> weights;  // per-site populations; empty means uniform

  int j_min() const { return -((n_sites - 1) / 2); }
  int j_max() const { return j_min() + n_sites - 1; }
  double phase_of(int j) const { return j * site_phase + z0_phase; }
};

Bunching bunching_discrete(std::span<const double> phases);

// Direct summation over uniformly populated sites.
Bunching bunching_lattice(const LatticeConfig& cfg);

// Dirichlet-kernel closed form of the same sum (cross-check only).
Bunching bunching_lattice_closed_form(const LatticeConfig& cfg);

// |sin(N x) / (N sin x)| near x = pi approximated by |sinc(N (pi - x))|.
double bunching_sinc_limit(int n_sites, double site_phase);

// Cold-lattice bunching scaled by the Debye-Waller factor exp(-2 (k zbar)^2).
Bunching bunching_thermal(const LatticeConfig& cfg);
double debye_waller(double kzbar);

struct WeightedBunching {
  Bunching b;
  double n_eff_linear = 0.0;  // N b0
  cplx n_eff_ring;            // N b+
};

// Population-weighted bunching; weights must have n_sites entries and n_total
// is the normalization N.
WeightedBunching bunching_weighted(const LatticeConfig& cfg, double n_total);

// Reads a single-column CSV of non-negative weights (blank lines and lines
// starting with '#' are skipped).
std::vector<double> load_weights_csv(const std::string& path);

}  // namespace cavlat
