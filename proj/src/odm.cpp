#include "cavlat/odm.hpp"

#include <cmath>

namespace cavlat {

namespace {

cplx delta_kappa(const DerivedParams& d, const DriveConfig& drive) {
  return {drive.delta_c, d.kappa};
}

}  // namespace

SteadyState steady_linear(const DerivedParams& d, const DriveConfig& drive, double b0, double n_atoms) {
  const cplx u = u_gamma(d, drive.delta_a);
  return {kI * drive.eta_plus / (delta_kappa(d, drive) - n_atoms * u * b0), {}};
}

SteadyState steady_ring(const DerivedParams& d, const DriveConfig& drive, cplx b_plus, double n_atoms) {
  const cplx nu = n_atoms * u_gamma(d, drive.delta_a);
  const cplx dk = delta_kappa(d, drive) - nu;
  const cplx den = dk * dk - nu * nu * std::norm(b_plus);
  const cplx b_minus = std::conj(b_plus);
  return {(kI * drive.eta_plus * dk + kI * drive.eta_minus * nu * b_minus) / den,
          (kI * drive.eta_minus * dk + kI * drive.eta_plus * nu * b_plus) / den};
}

ModePair symmetric_modes(const SteadyState& s, double z0_phase) {
  const cplx rot = std::polar(1.0, -2.0 * z0_phase);
  return {s.alpha_plus + s.alpha_minus * rot, s.alpha_plus - s.alpha_minus * rot};
}

namespace {

// Coefficients of the linear system with the saturation denominators
// frozen at the trial state s:  [[a, b], [c, a]] (alpha+, alpha-) = i eta.
struct FrozenSystem {
  cplx a, b, c;
};

FrozenSystem frozen(const DerivedParams& d, const DriveConfig& drive, std::span<const double> phases,
                    std::span<const double> weights, Geometry geometry, const SteadyState& s) {
  const cplx u = u_gamma(d, drive.delta_a);
  const double sat = d.g > 0.0 ? 2.0 * std::norm(u / d.g) : 0.0;
  cplx sum0{}, sum_m{}, sum_p{};
  for (std::size_t j = 0; j < phases.size(); ++j) {
    const double w = weights[j];
    if (w == 0.0) continue;
    const double p = phases[j];
    if (geometry == Geometry::Linear) {
      const double c2 = std::cos(p) * std::cos(p);
      sum0 += w * c2 / (1.0 + sat * std::norm(s.alpha_plus) * c2);
    } else {
      const cplx field = std::polar(1.0, p) * s.alpha_plus + std::polar(1.0, -p) * s.alpha_minus;
      const double den = 1.0 + sat * std::norm(field);
      sum0 += w / den;
      sum_m += w * std::polar(1.0, -2.0 * p) / den;
      sum_p += w * std::polar(1.0, 2.0 * p) / den;
    }
  }
  const cplx dk = delta_kappa(d, drive);
  return {dk - u * sum0, -u * sum_m, -u * sum_p};
}

SteadyState solve_frozen(const FrozenSystem& f, const DriveConfig& drive, Geometry geometry) {
  if (geometry == Geometry::Linear) return {kI * drive.eta_plus / f.a, {}};
  const cplx det = f.a * f.a - f.b * f.c;
  const cplx ep = kI * drive.eta_plus, em = kI * drive.eta_minus;
  return {(f.a * ep - f.b * em) / det, (f.a * em - f.c * ep) / det};
}

void check_inputs(std::span<const double> phases, std::span<const double> weights) {
  if (phases.size() != weights.size())
    throw ConfigError("solve_nonlinear: phases and weights differ in length");
  for (double w : weights)
    if (w < 0.0) throw ConfigError("solve_nonlinear: negative weight");
}

}  // namespace

double nonlinear_residual(const DerivedParams& d, const DriveConfig& drive,
                          std::span<const double> phases, std::span<const double> weights,
                          Geometry geometry, const SteadyState& s) {
  check_inputs(phases, weights);
  const FrozenSystem f = frozen(d, drive, phases, weights, geometry, s);
  const cplx rp = f.a * s.alpha_plus + f.b * s.alpha_minus - kI * drive.eta_plus;
  if (geometry == Geometry::Linear) return std::abs(rp);
  const cplx rm = f.c * s.alpha_plus + f.a * s.alpha_minus - kI * drive.eta_minus;
  return std::sqrt(std::norm(rp) + std::norm(rm));
}

NonlinearResult solve_nonlinear(const DerivedParams& d, const DriveConfig& drive,
                                std::span<const double> phases, std::span<const double> weights,
                                Geometry geometry, const NonlinearOptions& opt) {
  check_inputs(phases, weights);
  const SteadyState zero{};
  SteadyState s = solve_frozen(frozen(d, drive, phases, weights, geometry, zero), drive, geometry);

  const double eta_scale = std::abs(drive.eta_plus) + std::abs(drive.eta_minus);
  double res = 0.0;
  for (int it = 0; it <= opt.max_iterations; ++it) {
    res = nonlinear_residual(d, drive, phases, weights, geometry, s);
    const double amp = std::abs(s.alpha_plus) + std::abs(s.alpha_minus);
    if (res <= opt.tolerance * (eta_scale + d.kappa * amp)) return {s, it, res};
    const SteadyState next = solve_frozen(frozen(d, drive, phases, weights, geometry, s), drive, geometry);
    s.alpha_plus += opt.damping * (next.alpha_plus - s.alpha_plus);
    s.alpha_minus += opt.damping * (next.alpha_minus - s.alpha_minus);
  }
  throw ConvergenceError("solve_nonlinear: no convergence after " + std::to_string(opt.max_iterations) +
                             " iterations",
                         res);
}

SpectrumPoint spectra_odm(const SteadyState& s, const DriveConfig& drive, const DerivedParams& d,
                          Geometry geometry) {
  if (drive.eta_plus == 0.0) throw ConfigError("spectra_odm: eta_plus must be nonzero");
  if (!std::isfinite(d.kappa)) throw ConfigError("spectra_odm: the open Dicke model needs a finite kappa");
  SpectrumPoint sp;
  const cplx tp = d.kappa * s.alpha_plus / drive.eta_plus;
  sp.t_plus = std::norm(tp);
  sp.phase = std::arg(tp);
  if (geometry == Geometry::Linear) {
    sp.r_plus = std::norm(1.0 - tp);
    sp.absorption = 1.0 - sp.t_plus - sp.r_plus;
    return sp;
  }
  const cplx tm = d.kappa * s.alpha_minus / drive.eta_plus;
  const cplx ratio_m = drive.eta_minus / drive.eta_plus;
  sp.t_minus = std::norm(tm);
  sp.r_plus = std::norm(1.0 - tp);
  sp.r_minus = std::norm(ratio_m - tm);
  sp.absorption = (1.0 - sp.t_plus - sp.r_plus) + (std::norm(ratio_m) - sp.t_minus - sp.r_minus);
  return sp;
}

}  // namespace cavlat
