#pragma once

#include "cavlat/bunching.hpp"
#include "cavlat/odm.hpp"
#include "cavlat/params.hpp"

#include <vector>

namespace cavlat {

// Integer-order Bessel functions J_0..J_nmax at x by Miller's backward
// recurrence.
std::vector<double> bessel_j_table(int nmax, double x);
double bessel_j(int n, double x);

struct BlochConfig {
  double nu = 0.0;          // spreading parameter
  double omega_blo = 1.0;   // Bloch angular frequency
  int j_half = 0;           // sites j = -j_half..j_half
  std::vector<cplx> c0;     // initial amplitudes, sum |c|^2 = N

  int size() const { return 2 * j_half + 1; }
  double population() const;
  void validate() const;
};

// Dense row-major matrix U(j, j') over the truncated site range.
struct EvolutionMatrix {
  int j_half = 0;
  std::vector<cplx> data;

  int size() const { return 2 * j_half + 1; }
  cplx operator()(int j, int jp) const { return data[(j + j_half) * size() + (jp + j_half)]; }
};

EvolutionMatrix evolution_operator(const BlochConfig& cfg, double t);

// Largest deviation of (U^dagger U) from the identity, restricted to columns
// with |j'| <= interior (wave packets launched there stay inside the range).
double unitarity_defect(const EvolutionMatrix& u, int interior);

struct Populations {
  std::vector<double> p;   // |c_j(t)|^2
  double leak = 0.0;       // fraction of the population lost past the range edges
};

Populations evolve_populations(const BlochConfig& cfg, double t);

// Comb of equal populations on every `stride`-th site with |j| <= comb_half
// (the whole range when negative), normalized to n_total.
BlochConfig comb_config(int j_half, int stride, double n_total, double nu, double omega_blo, int comb_half = -1);

struct MonitorSample {
  double t_over_tblo = 0.0;
  double b = 0.0;       // b0 for the linear cavity, |b+| for the ring
  double n_eff = 0.0;   // N b0 or N |b+|
  cplx b_plus;
  SpectrumPoint spectrum;
  double leak = 0.0;
};

// The lattice's site_phase and z0_phase are used; its n_sites and weights
// are replaced by the Bloch range and the evolved populations.
std::vector<MonitorSample> monitor_timeseries(const BlochConfig& cfg, const LatticeConfig& lattice,
                                              const DerivedParams& d, const DriveConfig& drive,
                                              Geometry geometry, const std::vector<double>& times,
                                              int threads = 1);

}  // namespace cavlat
