#pragma once

#include "cavlat/common.hpp"

#include <optional>

namespace cavlat {

// Experimental constants. Rates and detunings are angular frequencies
// (rad/s); the free spectral range is an ordinary frequency in Hz, and a
// round trip of the empty cavity accumulates the phase delta_c / fsr.
struct PhysParams {
  double gamma = kTwoPi * 7.4e3;    // atomic linewidth
  double kappa = kTwoPi * 3.4e6;    // cavity field decay
  double fsr = 7.4e9;               // Hz
  double finesse = kPi * 7.4e9 / (kTwoPi * 3.4e6);
  double waist = 70e-6;
  double lambda_a = 689e-9;
  double lambda_lat = 689e-9;
  double n_atoms = 2e5;
  int n_sites = 300;
  double r_mir = 1.0;               // intensity reflectivity of each mirror
  double r_ls = 1.0;                // extra amplitude loss per pass
  double alpha_in = 1.0;
  double temp = 0.0;                // K
  double v0 = 0.0;                  // J
  double rabi = 0.0;                // saturating Rabi frequency for the TMM polarizability
  std::optional<double> g_override; // coupling given directly instead of from the mode geometry
  Geometry geometry = Geometry::Ring;

  // Throws ConfigError when an invariant is violated.
  void validate() const;
};

// Whichever of the cavity quantities the user supplied. Any sufficient
// subset is completed; over-determined inputs must agree to 1e-6.
struct CavityInputs {
  std::optional<double> kappa;
  std::optional<double> fsr;
  std::optional<double> finesse;
  std::optional<double> r_mir;
};

void resolve_cavity(PhysParams& p, const CavityInputs& in);

// Round-trip amplitude factor of the empty resonator.
double roundtrip_amplitude(double r_mir, double r_ls);
double kappa_from_mirrors(double fsr, double r_mir, double r_ls);
double mirror_reflectivity_from_kappa(double fsr, double kappa, double r_ls);

// Cavity mode shape factor: resonance shift per unit layer reflection
// coefficient, in units of fsr. 4 for the standing wave (antinode), 1 for
// the running wave.
double mode_factor(Geometry g);

struct DerivedParams {
  double gamma = 0.0;
  double kappa = 0.0;
  double fsr = 0.0;
  double g = 0.0;
  double upsilon = 0.0;
  cplx beta0;          // resonant single-atom reflection coefficient, purely imaginary
  double n1 = 0.0;     // atoms per layer
  double n_atoms = 0.0;
  double od = 0.0;
  double eta = 0.0;
  double zbar = 0.0;
  double k = 0.0;
  double mode = 1.0;   // mode_factor(geometry)
  double rabi = 0.0;
  Geometry geometry = Geometry::Ring;

  // Single-atom reflection coefficient at detuning delta_a.
  cplx beta(double delta_a) const;
};

DerivedParams derive(const PhysParams& p);

// U_gamma = g^2 / (delta_a + i gamma/2) = U0 - i gamma0.
cplx u_gamma(const DerivedParams& d, double delta_a);

// alpha_pol / eps0 in units of 6 pi / k^3; rabi = 0 gives the linear response.
cplx polarizability(double delta_a, double rabi, double gamma);

// Lattice-induced shift of the cavity resonance, fsr * N1 * |beta0| (rad/s).
struct ResonanceShift {
  double shift = 0.0;
  double ratio_to_kappa = 0.0;
};
ResonanceShift resonance_shift(const DerivedParams& d);

// Site phase k lambda_lat / 2 for a lattice detuned by delta_lat from the
// probe; exactly pi * lambda_lat / lambda_a at delta_lat = 0.
double lattice_site_phase(double delta_lat, double lambda_lat, double lambda_a);

}  // namespace cavlat
