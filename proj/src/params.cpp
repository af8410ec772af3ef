#include "cavlat/params.hpp"

#include <cmath>
#include <limits>

namespace cavlat {

void PhysParams::validate() const {
  if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
  if (!(kappa > 0.0)) throw ConfigError("kappa must be > 0");
  if (!(fsr > 0.0)) throw ConfigError("fsr must be > 0");
  if (!(waist > 0.0)) throw ConfigError("waist must be > 0");
  if (!(lambda_a > 0.0) || !(lambda_lat > 0.0)) throw ConfigError("wavelengths must be > 0");
  if (n_sites < 1) throw ConfigError("n_sites must be >= 1");
  if (!(n_atoms >= 0.0)) throw ConfigError("n_atoms must be >= 0");
  if (!(r_mir >= 0.0 && r_mir <= 1.0)) throw ConfigError("r_mir must lie in [0,1]");
  if (!(r_ls > 0.0 && r_ls <= 1.0)) throw ConfigError("r_ls must lie in (0,1]");
  if (!(temp >= 0.0) || !(v0 >= 0.0)) throw ConfigError("temp and v0 must be >= 0");
  if (!(rabi >= 0.0)) throw ConfigError("rabi must be >= 0");
  if (g_override && !(*g_override >= 0.0)) throw ConfigError("g must be >= 0");
  if (std::isfinite(kappa) &&
      std::abs(finesse - kPi * fsr / kappa) > 1e-6 * std::abs(finesse))
    throw ConfigError("finesse, kappa and fsr are inconsistent");
}

double roundtrip_amplitude(double r_mir, double r_ls) { return r_mir * r_ls * r_ls; }

double kappa_from_mirrors(double fsr, double r_mir, double r_ls) {
  const double rho = roundtrip_amplitude(r_mir, r_ls);
  if (rho <= 0.0) return std::numeric_limits<double>::infinity();
  return fsr * (1.0 - rho) / std::sqrt(rho);
}

double mirror_reflectivity_from_kappa(double fsr, double kappa, double r_ls) {
  const double x = kappa / fsr;
  const double s = 0.5 * (-x + std::sqrt(x * x + 4.0));
  const double r = s * s / (r_ls * r_ls);
  if (r > 1.0) throw ConfigError("kappa is smaller than the loss floor set by r_ls");
  return r;
}

namespace {

bool close(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= 1e-6 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

void resolve_cavity(PhysParams& p, const CavityInputs& in) {
  std::optional<double> kappa = in.kappa, fsr = in.fsr, fin = in.finesse, rm = in.r_mir;
  if (rm && !(*rm >= 0.0 && *rm <= 1.0)) throw ConfigError("r_mir must lie in [0,1]");

  if (!fsr) {
    if (kappa && fin) fsr = *fin * *kappa / kPi;
    else if (kappa && rm) {
      const double rho = roundtrip_amplitude(*rm, p.r_ls);
      if (rho <= 0.0 || rho >= 1.0) throw ConfigError("cannot derive fsr from kappa with r_mir in {0,1}");
      fsr = *kappa * std::sqrt(rho) / (1.0 - rho);
    } else {
      throw ConfigError("fsr is undetermined: give fsr, or kappa together with finesse or r_mir");
    }
  }
  if (!kappa) {
    if (fin) kappa = kPi * *fsr / *fin;
    else if (rm) kappa = kappa_from_mirrors(*fsr, *rm, p.r_ls);
    else throw ConfigError("kappa is undetermined: give kappa, finesse or r_mir");
  }
  if (!fin) fin = kPi * *fsr / *kappa;
  if (!rm) rm = mirror_reflectivity_from_kappa(*fsr, *kappa, p.r_ls);

  if (!close(*fin, kPi * *fsr / *kappa))
    throw ConfigError("finesse, kappa and fsr are inconsistent beyond 1e-6");
  if (!close(*kappa, kappa_from_mirrors(*fsr, *rm, p.r_ls)))
    throw ConfigError("r_mir is inconsistent with kappa and fsr beyond 1e-6");

  p.kappa = *kappa;
  p.fsr = *fsr;
  p.finesse = *fin;
  p.r_mir = *rm;
}

double mode_factor(Geometry g) { return g == Geometry::Linear ? 4.0 : 1.0; }

cplx DerivedParams::beta(double delta_a) const {
  return std::abs(beta0) * polarizability(delta_a, rabi, gamma);
}

DerivedParams derive(const PhysParams& p) {
  p.validate();
  DerivedParams d;
  d.gamma = p.gamma;
  d.kappa = p.kappa;
  d.fsr = p.fsr;
  d.geometry = p.geometry;
  d.mode = mode_factor(p.geometry);
  d.rabi = p.rabi;
  d.k = kTwoPi / p.lambda_a;
  const double kw2 = d.k * d.k * p.waist * p.waist;
  if (!(kw2 > 0.0) || !std::isfinite(kw2)) throw ConfigError("derive: k^2 w^2 must be finite and > 0");

  // Resonant reflection of one atom: the ratio of the optical cross-section
  // to the mode area, 6/(k w)^2, unless the coupling is pinned by hand.
  double beta_mag = 6.0 / kw2;
  if (p.g_override) {
    d.g = *p.g_override;
    beta_mag = 2.0 * d.g * d.g / (d.mode * p.gamma * p.fsr);
  } else {
    d.g = std::sqrt(0.5 * d.mode * p.gamma * p.fsr * beta_mag);
  }
  d.beta0 = cplx(0.0, beta_mag);
  d.upsilon = 4.0 * d.g * d.g / (p.kappa * p.gamma);
  d.n_atoms = p.n_atoms;
  d.n1 = p.n_atoms / p.n_sites;
  d.od = p.n_atoms * beta_mag;
  d.eta = p.alpha_in * std::sqrt(p.kappa * p.fsr);

  if (p.temp > 0.0) {
    if (p.v0 <= 0.0) throw ConfigError("derive: v0 = 0 with temp > 0 leaves the layer width undefined");
    d.zbar = std::sqrt(2.0 * kBoltzmann * p.temp / p.v0) / d.k;
  }
  return d;
}

cplx u_gamma(const DerivedParams& d, double delta_a) {
  return d.g * d.g / cplx(delta_a, 0.5 * d.gamma);
}

cplx polarizability(double delta_a, double rabi, double gamma) {
  const double x = 2.0 * delta_a / gamma;
  const double s = 2.0 * rabi * rabi / (gamma * gamma);
  return cplx(-x, 1.0) / (1.0 + x * x + s);
}

ResonanceShift resonance_shift(const DerivedParams& d) {
  ResonanceShift r;
  r.shift = d.fsr * d.n1 * std::abs(d.beta0);
  r.ratio_to_kappa = r.shift / d.kappa;
  return r;
}

double lattice_site_phase(double delta_lat, double lambda_lat, double lambda_a) {
  if (!(lambda_lat > 0.0) || !(lambda_a > 0.0)) throw ConfigError("lattice_site_phase: wavelengths must be > 0");
  const double omega_lat = kTwoPi * kSpeedOfLight / lambda_lat;
  return kPi * (lambda_lat / lambda_a) * (1.0 + delta_lat / omega_lat);
}

}  // namespace cavlat
