#include "cavlat/bunching.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cavlat {

Bunching bunching_discrete(std::span<const double> phases) {
  if (phases.empty()) throw ConfigError("bunching_discrete: empty position list");
  double c2 = 0.0;
  cplx e{};
  for (double p : phases) {
    const double c = std::cos(p);
    c2 += c * c;
    e += std::polar(1.0, 2.0 * p);
  }
  const double n = static_cast<double>(phases.size());
  return {c2 / n, e / n};
}

Bunching bunching_lattice(const LatticeConfig& cfg) {
  if (cfg.n_sites < 1) throw ConfigError("bunching_lattice: n_sites must be >= 1");
  double c2 = 0.0;
  cplx e{};
  for (int j = cfg.j_min(); j <= cfg.j_max(); ++j) {
    const double p = cfg.phase_of(j);
    const double c = std::cos(p);
    c2 += c * c;
    e += std::polar(1.0, 2.0 * p);
  }
  return {c2 / cfg.n_sites, e / static_cast<double>(cfg.n_sites)};
}

Bunching bunching_lattice_closed_form(const LatticeConfig& cfg) {
  const double n = cfg.n_sites;
  const double x = cfg.site_phase;
  const double s = std::sin(x);
  // sum_j exp(2ijx) over j_min..j_max = exp(i (j_min + j_max) x) sin(n x) / sin(x)
  double ratio = 1.0;
  if (std::abs(s) > 1e-300) ratio = std::sin(n * x) / (n * s);
  else ratio = std::cos(n * x) / std::cos(x);  // l'Hopital at multiples of pi
  const cplx bp = std::polar(ratio, 2.0 * cfg.z0_phase + (cfg.j_min() + cfg.j_max()) * x);
  return {0.5 + 0.5 * bp.real(), bp};
}

double bunching_sinc_limit(int n_sites, double site_phase) {
  const double arg = n_sites * (kPi - site_phase);
  if (arg == 0.0) return 1.0;
  return std::abs(std::sin(arg) / arg);
}

double debye_waller(double kzbar) { return std::exp(-2.0 * kzbar * kzbar); }

Bunching bunching_thermal(const LatticeConfig& cfg) {
  if (cfg.kzbar < 0.0) throw ConfigError("bunching_thermal: kzbar must be >= 0");
  Bunching b = bunching_lattice(cfg);
  const double dw = debye_waller(cfg.kzbar);
  return {0.5 + (b.b0 - 0.5) * dw, b.b_plus * dw};
}

WeightedBunching bunching_weighted(const LatticeConfig& cfg, double n_total) {
  if (static_cast<int>(cfg.weights.size()) != cfg.n_sites)
    throw ConfigError("bunching_weighted: weights length differs from n_sites");
  if (!(n_total > 0.0)) throw ConfigError("bunching_weighted: n_total must be > 0");
  double c2 = 0.0;
  cplx e{};
  for (int n = 0; n < cfg.n_sites; ++n) {
    const double w = cfg.weights[n];
    if (w < 0.0) throw ConfigError("bunching_weighted: negative weight");
    const double p = cfg.phase_of(cfg.j_min() + n);
    const double c = std::cos(p);
    c2 += w * c * c;
    e += w * std::polar(1.0, 2.0 * p);
  }
  WeightedBunching out;
  out.b = {c2 / n_total, e / n_total};
  out.n_eff_linear = n_total * out.b.b0;
  out.n_eff_ring = n_total * out.b.b_plus;
  return out;
}

std::vector<double> load_weights_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open weights file '" + path + "'");
  std::vector<double> w;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line.substr(first));
    double v;
    if (!(ss >> v)) {
      if (w.empty()) continue;  // header row
      throw ConfigError("weights file: cannot parse '" + line + "'");
    }
    if (v < 0.0) throw ConfigError("weights file: negative weight");
    w.push_back(v);
  }
  return w;
}

}  // namespace cavlat
