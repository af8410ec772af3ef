#include "cavlat/tmm_linear.hpp"

#include <algorithm>
#include <cmath>

namespace cavlat {

std::vector<double> thermal_sublayer_weights(double kzbar, double site_phase, int n_sub) {
  if (n_sub < 1) throw ConfigError("thermal_sublayer_weights: n_sub must be >= 1");
  if (!(kzbar >= 0.0)) throw ConfigError("thermal_sublayer_weights: kzbar must be >= 0");
  if (!(site_phase > 0.0)) throw ConfigError("thermal_sublayer_weights: site_phase must be > 0");
  std::vector<double> w(n_sub, 0.0);
  if (kzbar == 0.0) {
    w.back() = 1.0;
    return w;
  }
  const double step = site_phase / n_sub;
  const int images = 2 + static_cast<int>(std::ceil(10.0 * kzbar / site_phase));
  double total = 0.0;
  for (int m = 1; m <= n_sub; ++m) {
    const double u = (m - n_sub) * step;
    double s = 0.0;
    for (int q = -images; q <= images; ++q) {
      const double x = (u + q * site_phase) / kzbar;
      s += std::exp(-0.5 * x * x);
    }
    w[m - 1] = s;
    total += s;
  }
  if (!(total > 0.0)) {
    // Width far below the sheet spacing: everything collapses onto the site.
    std::fill(w.begin(), w.end(), 0.0);
    w.back() = 1.0;
    return w;
  }
  for (double& x : w) x /= total;
  return w;
}

namespace {

double site_scale(const LatticeConfig& cfg, int n) {
  if (cfg.weights.empty()) return 1.0;
  if (static_cast<int>(cfg.weights.size()) != cfg.n_sites)
    throw ConfigError("lattice weights length differs from n_sites");
  return cfg.weights[n];
}

}  // namespace

Mat2 lattice_stack(const LatticeConfig& cfg, cplx beta1, double period_phase, int n_sub) {
  if (cfg.n_sites < 0) throw ConfigError("lattice_stack: n_sites must be >= 0");
  Mat2 total = Mat2::identity();
  if (cfg.kzbar == 0.0) {
    const Mat2 p = propagation(period_phase);
    for (int n = 0; n < cfg.n_sites; ++n) total = atomic_layer(beta1 * site_scale(cfg, n)) * p * total;
    return total;
  }
  const std::vector<double> w = thermal_sublayer_weights(cfg.kzbar, cfg.site_phase, n_sub);
  const Mat2 p = propagation(period_phase / n_sub);
  for (int n = 0; n < cfg.n_sites; ++n) {
    const cplx b = beta1 * site_scale(cfg, n);
    for (int m = 0; m < n_sub; ++m) total = atomic_layer(b * w[m]) * p * total;
  }
  return total;
}

void LinearLayout::validate() const {
  if (lattice.n_sites < 0) throw ConfigError("layout: n_sites must be >= 0");
  if (!(length > 0.0)) throw ConfigError("layout: cavity length must be > 0");
  if (!(period > 0.0)) throw ConfigError("layout: lattice period must be > 0");
  if (gap() < -1e-9 * length) throw ConfigError("layout: lattice longer than the cavity");
  if (!(r_mir >= 0.0 && r_mir < 1.0)) throw ConfigError("layout: r_mir must lie in [0,1)");
  if (!(r_ls > 0.0 && r_ls <= 1.0)) throw ConfigError("layout: r_ls must lie in (0,1]");
  if (lattice.kzbar > 0.0 && n_sublayers < 1) throw ConfigError("layout: n_sublayers must be >= 1");
}

LinearLayout make_linear_layout(const PhysParams& p, const DerivedParams& d, double site_phase,
                                double z0_phase) {
  LinearLayout l;
  l.lattice.n_sites = p.n_sites;
  l.lattice.site_phase = site_phase;
  l.lattice.z0_phase = z0_phase;
  l.lattice.kzbar = d.k * d.zbar;
  l.length = kSpeedOfLight / (2.0 * p.fsr);
  l.period = 0.5 * p.lambda_lat;
  l.k = d.k;
  l.r_mir = p.r_mir;
  l.r_ls = p.r_ls;
  l.atoms_per_site = d.n1;
  return l;
}

std::vector<ChainElement> linear_chain(const LinearLayout& layout, cplx beta_atom, double delta_c) {
  layout.validate();
  const LatticeConfig& lat = layout.lattice;
  const double r = std::sqrt(layout.r_mir);
  const double a = std::max(0.0, layout.gap());
  const double phi = lat.site_phase;
  // Detuning phase per metre. Geometric phases are kept modulo 2 pi with the
  // empty cavity resonant at delta_c = 0: the input gap puts site j at
  // pi/2 + j phi + z0 from a field node at the input mirror, and the output
  // gap closes the total geometric phase to zero.
  const double kd = delta_c / kSpeedOfLight;
  const double psi1 = 0.5 * kPi + multiple_phase(lat.j_min() - 1, phi) + lat.z0_phase;
  const double psi2 = -psi1 - multiple_phase(lat.n_sites, phi) + layout.k * layout.length_offset;

  std::vector<ChainElement> chain;
  const bool thermal = lat.kzbar > 0.0;
  const int n_sub = thermal ? layout.n_sublayers : 1;
  chain.reserve(4 + static_cast<std::size_t>(lat.n_sites) * n_sub * 2);

  using K = ChainElement::Kind;
  chain.push_back({K::Mirror, beamsplitter_t(r), 0.0, 0.0, 0.0, 0.0});
  if (layout.r_ls < 1.0) chain.push_back({K::Loss, loss(layout.r_ls), 0.0, 0.0, 0.0, 0.0});
  const double ph1 = psi1 + kd * a;
  chain.push_back({K::Free, propagation(ph1), 0.0, a, ph1, 0.0});

  const std::vector<double> w =
      thermal ? thermal_sublayer_weights(lat.kzbar, phi, n_sub) : std::vector<double>{1.0};
  const double dz = layout.period / n_sub;
  const double dph = phi / n_sub + kd * dz;
  double z = a;
  for (int n = 0; n < lat.n_sites; ++n) {
    const double atoms = layout.atoms_per_site * site_scale(lat, n);
    for (int m = 0; m < n_sub; ++m) {
      chain.push_back({K::Free, propagation(dph), z, z + dz, dph, 0.0});
      z += dz;
      const double na = atoms * w[m];
      chain.push_back({K::Sheet, atomic_layer(na * beta_atom), z, z, 0.0, na});
    }
  }
  const double a2 = std::max(0.0, layout.length - z);
  const double ph2 = psi2 + kd * a2;
  chain.push_back({K::Free, propagation(ph2), z, layout.length, ph2, 0.0});
  chain.push_back({K::Mirror, beamsplitter_t(r).inverse(), layout.length, layout.length, 0.0, 0.0});
  return chain;
}

Mat2 chain_product(const std::vector<ChainElement>& chain) {
  Mat2 t = Mat2::identity();
  for (const auto& e : chain) t = e.m * t;
  return t;
}

SBlock chain_sblock(const std::vector<ChainElement>& chain) {
  SBlock s;
  for (const auto& e : chain) s = star(s, SBlock::from_transfer(e.m));
  return s;
}

std::vector<AmpPair> junction_fields(const std::vector<ChainElement>& chain, cplx in_left, cplx in_right) {
  const std::size_t n = chain.size();
  std::vector<SBlock> elem(n), suffix(n + 1);
  for (std::size_t i = 0; i < n; ++i) elem[i] = SBlock::from_transfer(chain[i].m);
  for (std::size_t i = n; i-- > 0;) suffix[i] = star(elem[i], suffix[i + 1]);
  std::vector<AmpPair> out(n + 1);
  SBlock prefix;
  for (std::size_t i = 0; i <= n; ++i) {
    out[i] = junction(prefix, suffix[i], in_left, in_right);
    if (i < n) prefix = star(prefix, elem[i]);
  }
  return out;
}

LinearAssembly assemble_linear(const LinearLayout& layout, cplx beta_atom, double delta_c) {
  if (layout.atoms_per_site == 0.0 || beta_atom == cplx{}) {
    // Without scatterers the free segments merge into one; the geometric
    // phases close to k * length_offset.
    layout.validate();
    const Mat2 bs = beamsplitter_t(std::sqrt(layout.r_mir));
    const double phase = layout.k * layout.length_offset + delta_c * layout.length / kSpeedOfLight;
    const Mat2 t = bs.inverse() * propagation(phase) * loss(layout.r_ls) * bs;
    return {t, s_from_t(t)};
  }
  const auto chain = linear_chain(layout, beta_atom, delta_c);
  return {chain_product(chain), chain_sblock(chain).scattering()};
}

namespace {

cplx beta_atom_at(const DerivedParams& d, const DriveConfig& drive) { return d.beta(drive.delta_a); }

}  // namespace

SpectrumPoint spectrum_point_linear(const LinearLayout& layout, const DerivedParams& d,
                                    const DriveConfig& drive) {
  const LinearAssembly as = assemble_linear(layout, beta_atom_at(d, drive), drive.delta_c);
  SpectrumPoint sp;
  sp.t_plus = std::norm(as.scattering.m11);
  sp.r_plus = std::norm(as.scattering.m21);
  sp.absorption = 1.0 - sp.t_plus - sp.r_plus;
  sp.phase = std::arg(as.scattering.m11);
  return sp;
}

namespace {

// Unit incidence from the left.
std::vector<AmpPair> linear_junctions(const std::vector<ChainElement>& chain) {
  return junction_fields(chain, 1.0, 0.0);
}

// Field at z from the boundary amplitudes, stopping before element `limit`.
// Zero-thickness elements at z are passed.
AmpPair field_from_junctions(const std::vector<ChainElement>& chain, const std::vector<AmpPair>& j,
                             std::size_t limit, double z) {
  std::size_t i = 0;
  while (i < limit && chain[i].z_end <= z) ++i;
  AmpPair v = j[i];
  if (i < limit) {
    const auto& e = chain[i];
    if (e.kind == ChainElement::Kind::Free && e.z_begin < z)
      v = propagation(e.phase * (z - e.z_begin) / (e.z_end - e.z_begin)) * v;
  }
  return v;
}

}  // namespace

AmpPair field_at(const LinearLayout& layout, const DerivedParams& d, const DriveConfig& drive, double z) {
  if (!(z >= 0.0 && z <= layout.length)) throw ConfigError("field_at: z outside the cavity");
  const auto chain = linear_chain(layout, beta_atom_at(d, drive), drive.delta_c);
  // The output mirror sits at z = length; stop just inside it.
  return field_from_junctions(chain, linear_junctions(chain), chain.size() - 1, z);
}

std::vector<ProfileSample> intensity_profile(const LinearLayout& layout, const DerivedParams& d,
                                             const DriveConfig& drive) {
  const auto chain = linear_chain(layout, beta_atom_at(d, drive), drive.delta_c);
  const auto j = linear_junctions(chain);
  std::vector<ProfileSample> out;
  out.reserve(chain.size());
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const auto& e = chain[i];
    if (e.kind == ChainElement::Kind::Sheet) out.push_back({e.z_end, j[i], e.atoms});
    else out.push_back({e.z_end, j[i + 1], 0.0});
  }
  return out;
}

std::vector<ProfileSample> intensity_profile(const LinearLayout& layout, const DerivedParams& d,
                                             const DriveConfig& drive, const std::vector<double>& z) {
  const auto chain = linear_chain(layout, beta_atom_at(d, drive), drive.delta_c);
  const auto j = linear_junctions(chain);
  std::vector<ProfileSample> out;
  out.reserve(z.size());
  for (double zz : z) {
    if (!(zz >= 0.0 && zz <= layout.length)) throw ConfigError("intensity_profile: z outside the cavity");
    out.push_back({zz, field_from_junctions(chain, j, chain.size() - 1, zz), 0.0});
  }
  return out;
}

std::vector<SheetSample> sheet_samples(const std::vector<ChainElement>& chain,
                                       const std::vector<AmpPair>& junctions) {
  if (junctions.size() != chain.size() + 1) throw ConfigError("sheet_samples: junction count mismatch");
  std::vector<SheetSample> out;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& e = chain[i];
    if (e.kind == ChainElement::Kind::Sheet && e.atoms > 0.0)
      out.push_back({e.z_end, e.atoms, junctions[i], junctions[i + 1]});
  }
  return out;
}

std::vector<SheetSample> linear_sheet_samples(const LinearLayout& layout, const DerivedParams& d,
                                              const DriveConfig& drive) {
  const auto chain = linear_chain(layout, beta_atom_at(d, drive), drive.delta_c);
  return sheet_samples(chain, linear_junctions(chain));
}

double spont_check(const std::vector<SheetSample>& sheets) {
  const std::size_t n = sheets.size();
  if (n < 3) throw NumericalError("spont_check: need at least three populated sheets");
  double mx = 0.0, my = 0.0;
  for (const auto& s : sheets) {
    mx += s.flux_drop();
    my += s.overlap();
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& s : sheets) {
    const double dx = s.flux_drop() - mx, dy = s.overlap() - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double scale_x = std::max(std::abs(mx), 1e-300), scale_y = std::max(std::abs(my), 1e-300);
  if (sxx <= 1e-24 * n * scale_x * scale_x || syy <= 1e-24 * n * scale_y * scale_y || sxx == 0.0 || syy == 0.0)
    throw NumericalError("spont_check: degenerate profile, correlation undefined");
  return sxy / std::sqrt(sxx * syy);
}

RetuneResult retune_length(const LinearLayout& layout, const DerivedParams& d, const DriveConfig& drive) {
  // Transmission is periodic in the offset with period lambda / 2.
  const double half = kPi / layout.k;
  auto trans = [&](double off) {
    LinearLayout l = layout;
    l.length_offset = off;
    return spectrum_point_linear(l, d, drive).t_plus;
  };
  constexpr int kCoarse = 1000;
  double best_x = 0.0, best_t = -1.0, worst_t = 1e300;
  for (int i = 0; i < kCoarse; ++i) {
    const double x = -0.5 * half + half * i / kCoarse;
    const double t = trans(x);
    if (t > best_t) best_t = t, best_x = x;
    worst_t = std::min(worst_t, t);
  }
  if (best_t - worst_t <= 1e-12 * std::max(best_t, 1e-300)) return {0.0, trans(0.0), true};

  const double step = half / kCoarse;
  double lo = best_x - step, hi = best_x + step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = trans(x1), f2 = trans(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 > f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - g * (hi - lo); f1 = trans(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + g * (hi - lo); f2 = trans(x2);
    }
    if (hi - lo < 1e-15 * half) break;
  }
  const double x = 0.5 * (lo + hi);
  const double t = trans(x);
  if (t >= best_t) return {x, t, false};
  return {best_x, best_t, false};
}

}  // namespace cavlat
