#pragma once

#include "cavlat/scan.hpp"

#include <cstdint>

namespace cavlat {

// Linear-cavity TMM spectra for output mirror displacements
// n / n_offsets * lambda_lat / 2, n = 1..n_offsets, and their sums over the
// intensity channels (T_plus, R_plus, A).
struct FilterResult {
  std::vector<SpectrumGrid> per_offset;
  SpectrumGrid sum;
  SpectrumGrid normalized;   // sum / n_offsets
};

FilterResult filter_experiment(const RunConfig& base, int n_offsets, double r_mir, int threads = 1);

// The same scan with the mirrors removed (r_mir = 0).
SpectrumGrid free_space_map(const RunConfig& base, int threads = 1);

// Root-mean-square difference of one channel between two grids of equal shape.
double map_l2_distance(const SpectrumGrid& a, const SpectrumGrid& b, const std::string& channel);

struct FreeSpaceRow {
  int layer = 0;                // j = 1..n_sites
  double intensity = 0.0;       // |a+ + a-|^2 at layer j, unit incidence
  double flux = 0.0;            // |a+|^2 - |a-|^2 behind layer j
  double transmission = 0.0;    // T of the first j layers alone
  double beer = 0.0;            // |1/(1 - i beta1)|^(2j)
  double ohm = 0.0;             // 1/(1 + c j) with the Beer initial slope
};

struct FreeSpaceSpec {
  int n_sites = 300;
  cplx beta1;
  double site_phase = kPi;
  bool disordered = false;      // uniformly random phase between layers
  int realizations = 64;        // disordered only; transmission is the geometric mean
  std::uint64_t seed = 1;
};

std::vector<FreeSpaceRow> free_space_intensity(const FreeSpaceSpec& spec);

// Builds the stack from a run configuration. A positive density (m^-3)
// fixes the atoms per layer as density * pi w^2 * lambda_lat / 2.
FreeSpaceSpec free_space_spec(const RunConfig& rc);

}  // namespace cavlat
