#pragma once

#include "cavlat/bunching.hpp"
#include "cavlat/params.hpp"
#include "cavlat/spectrum.hpp"

#include <span>

namespace cavlat {

struct DriveConfig {
  double delta_c = 0.0;   // probe - cavity
  double delta_a = 0.0;   // probe - atom
  cplx eta_plus{1.0};
  cplx eta_minus{};

  double delta_ca() const { return delta_c - delta_a; }
};

struct SteadyState {
  cplx alpha_plus;   // the linear cavity uses only this amplitude
  cplx alpha_minus;
};


// Low-saturation solutions of the open Dicke model.
SteadyState steady_linear(const DerivedParams& d, const DriveConfig& drive, double b0, double n_atoms);
SteadyState steady_ring(const DerivedParams& d, const DriveConfig& drive, cplx b_plus, double n_atoms);

// alpha+ +/- alpha- exp(-2 i k z0): the modes that do / do not couple to a
// perfectly bunched lattice.
struct ModePair {
  cplx symmetric;
  cplx antisymmetric;
};
ModePair symmetric_modes(const SteadyState& s, double z0_phase);

struct NonlinearOptions {
  double damping = 0.5;
  int max_iterations = 10000;
  double tolerance = 1e-10;
};

struct NonlinearResult {
  SteadyState state;
  int iterations = 0;
  double residual = 0.0;
};

class ConvergenceError : public NumericalError {
public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalError(what), last_residual(residual) {}
  double last_residual;
};

// Saturating steady state for atoms at phases k z_j carrying weights w_j
// (atoms per position). Damped fixed-point iteration started from the
// linearized solution; returns the branch connected to it.
NonlinearResult solve_nonlinear(const DerivedParams& d, const DriveConfig& drive,
                                std::span<const double> phases, std::span<const double> weights,
                                Geometry geometry, const NonlinearOptions& opt = {});

// Residual norm of the saturating equations for a trial state.
double nonlinear_residual(const DerivedParams& d, const DriveConfig& drive,
                          std::span<const double> phases, std::span<const double> weights,
                          Geometry geometry, const SteadyState& s);

SpectrumPoint spectra_odm(const SteadyState& s, const DriveConfig& drive, const DerivedParams& d,
                          Geometry geometry);

}  // namespace cavlat
