#include "cavlat/tmm_ring.hpp"

#include <algorithm>
#include <cmath>

namespace cavlat {

void RingLayout::validate() const {
  if (lattice.n_sites < 0) throw ConfigError("ring layout: n_sites must be >= 0");
  if (!(length > 0.0) || !(period > 0.0)) throw ConfigError("ring layout: length and period must be > 0");
  if (d < 0.0) throw ConfigError("ring layout: d must be >= 0");
  if (gap() < -1e-9 * length) throw ConfigError("ring layout: lattice and paths exceed the round trip");
  if (!(r_ic >= 0.0 && r_ic <= 1.0) || !(r_hr >= 0.0 && r_hr <= 1.0))
    throw ConfigError("ring layout: coupler reflectivity outside [0,1]");
  if (t_ic() == 0.0) throw ConfigError("ring layout: input coupler transmits nothing");
  if (!(r_ls > 0.0 && r_ls <= 1.0)) throw ConfigError("ring layout: r_ls must lie in (0,1]");
}

RingLayout make_ring_layout(const PhysParams& p, const DerivedParams& d, double site_phase, double z0_phase) {
  RingLayout l;
  l.lattice.n_sites = p.n_sites;
  l.lattice.site_phase = site_phase;
  l.lattice.z0_phase = z0_phase;
  l.lattice.kzbar = d.k * d.zbar;
  l.length = kSpeedOfLight / p.fsr;
  l.period = 0.5 * p.lambda_lat;
  l.k = d.k;
  l.d = 0.25 * (l.length - p.n_sites * l.period);
  l.r_ic = std::sqrt(p.r_mir);
  l.r_hr = std::sqrt(p.r_mir);
  l.r_ls = p.r_ls;
  l.atoms_per_site = d.n1;
  return l;
}

std::vector<ChainElement> ring_chain(const RingLayout& layout, cplx beta_atom, double delta_c) {
  layout.validate();
  if (layout.r_hr == 0.0) throw NumericalError("ring: output coupler with r_hr = 0 has no transfer matrix");
  const LatticeConfig& lat = layout.lattice;
  const double phi = lat.site_phase;
  const double kd = delta_c / kSpeedOfLight;
  const double a = std::max(0.0, layout.gap());
  const double dd = layout.d;
  using K = ChainElement::Kind;

  // Site j sits at phase pi/2 + j phi + z0 from point 1, which lines the
  // sheet coupling up with the running-wave mode functions exp(+-ikz) of the
  // mean-field picture. The second gap closes the geometric round-trip phase
  // to zero so the empty ring resonates at delta_c = 0.
  const double psi1 = 0.5 * kPi + multiple_phase(lat.j_min() - 1, phi) + lat.z0_phase;
  const double psi2 = -psi1 - multiple_phase(lat.n_sites, phi);

  std::vector<ChainElement> chain;
  double z = 0.0;
  auto free = [&](double len, double geo) {
    const double ph = geo + kd * len;
    chain.push_back({K::Free, propagation(ph), z, z + len, ph, 0.0});
    z += len;
  };
  auto lossy = [&] {
    if (layout.r_ls < 1.0) chain.push_back({K::Loss, loss(layout.r_ls), z, z, 0.0, 0.0});
  };

  free(dd, 0.0);
  lossy();
  free(a, psi1);
  const bool thermal = lat.kzbar > 0.0;
  const int n_sub = thermal ? layout.n_sublayers : 1;
  const std::vector<double> w =
      thermal ? thermal_sublayer_weights(lat.kzbar, phi, n_sub) : std::vector<double>{1.0};
  for (int n = 0; n < lat.n_sites; ++n) {
    const double atoms = layout.atoms_per_site * (lat.weights.empty() ? 1.0 : lat.weights.at(n));
    for (int m = 0; m < n_sub; ++m) {
      free(layout.period / n_sub, phi / n_sub);
      const double na = atoms * w[m];
      chain.push_back({K::Sheet, atomic_layer(na * beta_atom), z, z, 0.0, na});
    }
  }
  free(a, psi2);
  chain.push_back({K::Mirror, Mat2::diag(-layout.r_hr, -1.0 / layout.r_hr), z, z, 0.0, 0.0});
  lossy();
  free(dd, 0.0);
  return chain;
}

RingMatrices roundtrip(const RingLayout& layout, cplx beta_atom, double delta_c) {
  const auto chain = ring_chain(layout, beta_atom, delta_c);
  RingMatrices out;
  Mat2 t = Mat2::identity();
  for (const auto& e : chain) {
    if (e.kind == ChainElement::Kind::Mirror) out.to_output = t;
    t = e.m * t;
  }
  out.roundtrip = t;
  return out;
}

Mat2 y_matrix(const Mat2& r, double r_ic, double t_ic) {
  if (t_ic == 0.0) throw NumericalError("y_matrix: input coupler transmits nothing");
  const Mat2 yinv{1.0 + r_ic * r.m11, r_ic * r.m12, r.m21, r_ic + r.m22, MatRole::Transfer};
  // Every element of the round trip is unimodular, so det R = 1 and
  // det(Y^-1) t^2 = 2 r + R22 + r^2 R11. Expanding the 2x2 determinant
  // instead cancels catastrophically for optically thick stacks.
  const cplx det = 2.0 * r_ic + r.m22 + r_ic * r_ic * r.m11;
  const double scale = std::max({std::abs(yinv.m11), std::abs(yinv.m12), std::abs(yinv.m21), std::abs(yinv.m22)});
  if (!std::isfinite(scale)) throw NumericalError("y_matrix: round-trip matrix overflowed");
  if (std::abs(det) <= 1e-14 * scale) throw NumericalError("y_matrix: degenerate cavity, Y^-1 is singular");
  Mat2 y{yinv.m22, -yinv.m12, -yinv.m21, yinv.m11, MatRole::Transfer};
  y *= t_ic / det;
  return y;
}

Mat2 x_matrix(const Mat2& r, const Mat2& y, double r_ic, double t_ic) {
  const Mat2 pick{r.m11, r.m12, 0.0, 1.0, MatRole::Transfer};
  Mat2 x = pick * y;
  x *= t_ic;
  x.m11 += r_ic;
  x.m22 += r_ic;
  return x;
}

namespace {

struct RingSolution {
  std::vector<ChainElement> chain;
  std::vector<AmpPair> junctions;  // junctions[0] is point 1, the last is point 6
};

// Closes the round trip through the input coupler in scattering form:
// p1+ = t in+ - r p6+ and p6- = t in- - r p1-, with p6+ and p1- given by the
// scattering block of the round trip.
RingSolution solve_ring(const RingLayout& layout, const DerivedParams& d, const DriveConfig& drive) {
  RingSolution sol;
  sol.chain = ring_chain(layout, d.beta(drive.delta_a), drive.delta_c);
  const SBlock s = chain_sblock(sol.chain);
  const double r = layout.r_ic, t = layout.t_ic();
  const cplx a11 = 1.0 + r * s.t, a12 = r * s.rr, a21 = r * s.rl, a22 = 1.0 + r * s.tp;
  const cplx det = a11 * a22 - a12 * a21;
  const double scale = std::max({std::abs(a11 * a22), std::abs(a12 * a21), 1.0});
  if (std::abs(det) <= 1e-14 * scale) throw NumericalError("ring: degenerate cavity, closure is singular");
  const cplx b1 = t * drive.eta_plus, b2 = t * drive.eta_minus;
  const cplx p1_plus = (a22 * b1 - a12 * b2) / det;
  const cplx p6_minus = (a11 * b2 - a21 * b1) / det;
  sol.junctions = junction_fields(sol.chain, p1_plus, p6_minus);
  return sol;
}

}  // namespace

RingOutputs ring_outputs(const RingLayout& layout, const DerivedParams& d, const DriveConfig& drive) {
  const RingSolution sol = solve_ring(layout, d, drive);
  std::size_t mirror = 0;
  while (sol.chain[mirror].kind != ChainElement::Kind::Mirror) ++mirror;
  const double th = layout.t_hr(), r = layout.r_ic, t = layout.t_ic();
  const AmpPair& p1 = sol.junctions.front();
  const AmpPair& p6 = sol.junctions.back();
  RingOutputs out;
  out.at_point1 = p1;
  out.transmitted = {th * sol.junctions[mirror].plus, th * sol.junctions[mirror + 1].minus};
  out.reflected = {t * p6.plus + r * drive.eta_plus, t * p1.minus + r * drive.eta_minus};
  return out;
}

SpectrumPoint spectrum_point_ring(const RingLayout& layout, const DerivedParams& d, const DriveConfig& drive) {
  if (drive.eta_plus == 0.0) throw ConfigError("ring spectrum: eta_plus must be nonzero");
  const RingOutputs o = ring_outputs(layout, d, drive);
  const double norm = std::norm(drive.eta_plus);
  SpectrumPoint sp;
  sp.t_plus = std::norm(o.transmitted.plus) / norm;
  sp.t_minus = std::norm(o.transmitted.minus) / norm;
  sp.r_plus = std::norm(o.reflected.plus) / norm;
  sp.r_minus = std::norm(o.reflected.minus) / norm;
  sp.absorption = (norm + std::norm(drive.eta_minus)) / norm - sp.t_plus - sp.t_minus - sp.r_plus - sp.r_minus;
  // Referenced to the plane half a round trip past the input coupler, as for
  // the standing-wave cavity, instead of the output coupler at length - d.
  const double shift = drive.delta_c * (0.5 * layout.length - layout.d) / kSpeedOfLight;
  sp.phase = std::arg(o.transmitted.plus / drive.eta_plus * std::polar(1.0, -shift));
  return sp;
}

AmpPair ring_field_at(const RingLayout& layout, const DerivedParams& d, const DriveConfig& drive, double z) {
  if (!(z >= 0.0 && z <= layout.length)) throw ConfigError("ring_field_at: z outside the round trip");
  const RingSolution sol = solve_ring(layout, d, drive);
  // Zero-thickness couplers and loss elements located exactly at z are not
  // yet passed; sheets and free paths ending at z are.
  std::size_t i = 0;
  for (; i < sol.chain.size(); ++i) {
    const auto& e = sol.chain[i];
    const bool passes = e.z_end < z || (e.z_end == z && (e.kind == ChainElement::Kind::Free ||
                                                          e.kind == ChainElement::Kind::Sheet));
    if (!passes) break;
  }
  AmpPair v = sol.junctions[i];
  if (i < sol.chain.size()) {
    const auto& e = sol.chain[i];
    if (e.kind == ChainElement::Kind::Free && e.z_begin < z)
      v = propagation(e.phase * (z - e.z_begin) / (e.z_end - e.z_begin)) * v;
  }
  return v;
}

std::vector<ProfileSample> ring_intensity_profile(const RingLayout& layout, const DerivedParams& d,
                                                  const DriveConfig& drive) {
  const RingSolution sol = solve_ring(layout, d, drive);
  std::vector<ProfileSample> out;
  out.reserve(sol.chain.size() + 1);
  out.push_back({0.0, sol.junctions.front(), 0.0});
  for (std::size_t i = 0; i < sol.chain.size(); ++i) {
    const auto& e = sol.chain[i];
    if (e.kind == ChainElement::Kind::Sheet) out.push_back({e.z_end, sol.junctions[i], e.atoms});
    else out.push_back({e.z_end, sol.junctions[i + 1], 0.0});
  }
  return out;
}

std::vector<SheetSample> ring_sheet_samples(const RingLayout& layout, const DerivedParams& d,
                                            const DriveConfig& drive) {
  const RingSolution sol = solve_ring(layout, d, drive);
  return sheet_samples(sol.chain, sol.junctions);
}

}  // namespace cavlat
