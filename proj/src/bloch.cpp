#include "cavlat/bloch.hpp"

#include "cavlat/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace cavlat {

std::vector<double> bessel_j_table(int nmax, double x) {
  if (nmax < 0) throw ConfigError("bessel_j_table: nmax must be >= 0");
  std::vector<double> out(nmax + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double ax = std::abs(x);
  const double top = std::max<double>(nmax, ax);
  int start = static_cast<int>(top + 30.0 + 12.0 * std::sqrt(top));
  start += start % 2;  // even, so the normalization sum picks up J_0

  std::vector<double> j(start + 2, 0.0);
  j[start + 1] = 0.0;
  j[start] = 1e-300;
  double norm = 0.0;
  for (int n = start; n >= 1; --n) {
    j[n - 1] = 2.0 * n / ax * j[n] - j[n + 1];
    if (std::abs(j[n - 1]) > 1e250) {
      for (int m = n - 1; m <= start; ++m) j[m] *= 1e-250;
      norm *= 1e-250;
    }
    if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * j[n - 1];
  }
  norm += j[0];
  for (int n = 0; n <= nmax; ++n) {
    double v = j[n] / norm;
    if (x < 0.0 && n % 2 == 1) v = -v;
    out[n] = v;
  }
  return out;
}

double bessel_j(int n, double x) {
  const int an = std::abs(n);
  const double v = bessel_j_table(an, x)[an];
  return (n < 0 && an % 2 == 1) ? -v : v;
}

double BlochConfig::population() const {
  double s = 0.0;
  for (const cplx& c : c0) s += std::norm(c);
  return s;
}

void BlochConfig::validate() const {
  if (j_half < 0) throw ConfigError("bloch: j_half must be >= 0");
  if (static_cast<int>(c0.size()) != size()) throw ConfigError("bloch: c0 length differs from the site range");
  if (!(omega_blo > 0.0)) throw ConfigError("bloch: omega_blo must be > 0");
  if (nu < 0.0) throw ConfigError("bloch: nu must be >= 0");
}

EvolutionMatrix evolution_operator(const BlochConfig& cfg, double t) {
  if (t < 0.0) throw ConfigError("evolution_operator: t must be >= 0");
  const int n = cfg.size();
  const double wt = cfg.omega_blo * t;
  const double arg = 2.0 * cfg.nu * std::sin(0.5 * wt);
  const std::vector<double> jn = bessel_j_table(n, arg);
  auto bes = [&](int m) {
    const int am = std::abs(m);
    return (m < 0 && am % 2 == 1) ? -jn[am] : jn[am];
  };
  EvolutionMatrix u{cfg.j_half, std::vector<cplx>(static_cast<std::size_t>(n) * n)};
  for (int j = -cfg.j_half; j <= cfg.j_half; ++j)
    for (int jp = -cfg.j_half; jp <= cfg.j_half; ++jp) {
      const double phase = 0.5 * (j - jp) * (kPi - wt) - jp * wt;
      u.data[(j + cfg.j_half) * n + (jp + cfg.j_half)] = std::polar(bes(j - jp), phase);
    }
  return u;
}

double unitarity_defect(const EvolutionMatrix& u, int interior) {
  interior = std::min(interior, u.j_half);
  double worst = 0.0;
  for (int a = -interior; a <= interior; ++a)
    for (int b = -interior; b <= interior; ++b) {
      cplx s{};
      for (int j = -u.j_half; j <= u.j_half; ++j) s += std::conj(u(j, a)) * u(j, b);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

Populations evolve_populations(const BlochConfig& cfg, double t) {
  cfg.validate();
  const EvolutionMatrix u = evolution_operator(cfg, t);
  const int n = cfg.size();
  Populations out;
  out.p.resize(n);
  double total = 0.0;
  for (int r = 0; r < n; ++r) {
    cplx s{};
    for (int c = 0; c < n; ++c) s += u.data[r * n + c] * cfg.c0[c];
    out.p[r] = std::norm(s);
    total += out.p[r];
  }
  const double n0 = cfg.population();
  out.leak = n0 > 0.0 ? std::max(0.0, 1.0 - total / n0) : 0.0;
  return out;
}

BlochConfig comb_config(int j_half, int stride, double n_total, double nu, double omega_blo, int comb_half) {
  if (stride < 1) throw ConfigError("comb_config: stride must be >= 1");
  if (comb_half < 0) comb_half = j_half;
  if (comb_half > j_half) throw ConfigError("comb_config: comb_half exceeds j_half");
  BlochConfig cfg;
  cfg.nu = nu;
  cfg.omega_blo = omega_blo;
  cfg.j_half = j_half;
  cfg.c0.assign(cfg.size(), cplx{});
  int count = 0;
  for (int j = -comb_half; j <= comb_half; ++j)
    if (j % stride == 0) ++count;
  const double amp = std::sqrt(n_total / count);
  for (int j = -comb_half; j <= comb_half; ++j)
    if (j % stride == 0) cfg.c0[j + j_half] = amp;
  return cfg;
}

std::vector<MonitorSample> monitor_timeseries(const BlochConfig& cfg, const LatticeConfig& lattice,
                                              const DerivedParams& d, const DriveConfig& drive,
                                              Geometry geometry, const std::vector<double>& times,
                                              int threads) {
  cfg.validate();
  const double n_total = cfg.population();
  if (!(n_total > 0.0)) throw ConfigError("monitor_timeseries: empty initial state");
  const double t_blo = kTwoPi / cfg.omega_blo;
  std::vector<MonitorSample> out(times.size());
  parallel_for(times.size(), threads, [&](std::size_t i) {
    const Populations pop = evolve_populations(cfg, times[i]);
    LatticeConfig lat = lattice;
    lat.n_sites = cfg.size();
    lat.weights = pop.p;
    const WeightedBunching wb = bunching_weighted(lat, n_total);
    MonitorSample& m = out[i];
    m.t_over_tblo = times[i] / t_blo;
    m.b_plus = wb.b.b_plus;
    m.leak = pop.leak;
    if (geometry == Geometry::Linear) {
      m.b = wb.b.b0;
      m.n_eff = wb.n_eff_linear;
      m.spectrum = spectra_odm(steady_linear(d, drive, wb.b.b0, n_total), drive, d, geometry);
    } else {
      m.b = std::abs(wb.b.b_plus);
      m.n_eff = std::abs(wb.n_eff_ring);
      m.spectrum = spectra_odm(steady_ring(d, drive, wb.b.b_plus, n_total), drive, d, geometry);
    }
  });
  return out;
}

}  // namespace cavlat
