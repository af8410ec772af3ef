#include "cavlat/experiments.hpp"

#include "cavlat/tmm_linear.hpp"

#include <cmath>
#include <random>

namespace cavlat {

namespace {

RunConfig with_mirrors(const RunConfig& base, double r_mir) {
  RunConfig rc = base;
  rc.model = Model::TMM;
  rc.phys.geometry = Geometry::Linear;
  rc.phys.r_mir = r_mir;
  rc.phys.kappa = kappa_from_mirrors(rc.phys.fsr, r_mir, rc.phys.r_ls);
  rc.phys.finesse = kPi * rc.phys.fsr / rc.phys.kappa;
  return rc;
}

const std::vector<std::string> kSummed = {"T_plus", "R_plus", "A"};

}  // namespace

FilterResult filter_experiment(const RunConfig& base, int n_offsets, double r_mir, int threads) {
  if (n_offsets < 1) throw ConfigError("filter_experiment: n_offsets must be >= 1");
  if (base.x.name == "cav_offset" || (base.y && base.y->name == "cav_offset"))
    throw ConfigError("filter_experiment: cav_offset cannot be a scan axis here");
  RunConfig rc = with_mirrors(base, r_mir);
  rc.channels = {"T_plus", "R_plus", "A", "phase"};

  FilterResult out;
  const double half = 0.5 * rc.phys.lambda_lat;
  for (int n = 1; n <= n_offsets; ++n) {
    RunConfig r = rc;
    r.cav_offset = base.cav_offset + half * n / n_offsets;
    out.per_offset.push_back(run_scan(r, threads));
  }
  out.sum = out.per_offset.front();
  out.sum.channels = kSummed;
  out.sum.values.assign(kSummed.size(), std::vector<double>(out.sum.values.front().size(), 0.0));
  for (const auto& g : out.per_offset)
    for (std::size_t c = 0; c < kSummed.size(); ++c) {
      const auto& src = g.channel(kSummed[c]);
      for (std::size_t i = 0; i < src.size(); ++i) out.sum.values[c][i] += src[i];
    }
  out.normalized = out.sum;
  for (auto& ch : out.normalized.values)
    for (double& v : ch) v /= n_offsets;
  return out;
}

SpectrumGrid free_space_map(const RunConfig& base, int threads) {
  RunConfig rc = with_mirrors(base, 0.0);
  rc.channels = {"T_plus", "R_plus", "A", "phase"};
  return run_scan(rc, threads);
}

double map_l2_distance(const SpectrumGrid& a, const SpectrumGrid& b, const std::string& channel) {
  const auto& va = a.channel(channel);
  const auto& vb = b.channel(channel);
  if (va.size() != vb.size() || va.empty()) throw ConfigError("map_l2_distance: grids differ in shape");
  double s = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) s += (va[i] - vb[i]) * (va[i] - vb[i]);
  return std::sqrt(s / va.size());
}

namespace {

struct StackRun {
  std::vector<double> intensity, flux, log_t;
};

// One pass through the bare stack. Phases between layers are either the
// fixed site phase or drawn from rng.
StackRun run_stack(const FreeSpaceSpec& spec, std::mt19937_64* rng) {
  std::vector<double> phases(spec.n_sites, spec.site_phase);
  if (rng)
    for (double& p : phases) p = kTwoPi * static_cast<double>((*rng)() >> 11) * 0x1.0p-53;
  const Mat2 layer = atomic_layer(spec.beta1);

  // Transfer matrices of the partial stacks give T_j = 1 / |m22|^2 (det = 1).
  StackRun r;
  r.log_t.resize(spec.n_sites);
  Mat2 m = Mat2::identity();
  for (int j = 0; j < spec.n_sites; ++j) {
    m = layer * propagation(phases[j]) * m;
    r.log_t[j] = -std::log(std::norm(m.m22));
  }
  const AmpPair left{1.0, -m.m21 / m.m22};
  AmpPair v = left;
  r.intensity.resize(spec.n_sites);
  r.flux.resize(spec.n_sites);
  for (int j = 0; j < spec.n_sites; ++j) {
    v = propagation(phases[j]) * v;
    r.intensity[j] = std::norm(v.sum());
    v = layer * v;
    r.flux[j] = v.flux();
  }
  return r;
}

}  // namespace

std::vector<FreeSpaceRow> free_space_intensity(const FreeSpaceSpec& spec) {
  if (spec.n_sites < 1) throw ConfigError("free_space_intensity: n_sites must be >= 1");
  if (spec.disordered && spec.realizations < 1) throw ConfigError("free_space_intensity: realizations must be >= 1");
  StackRun acc;
  if (!spec.disordered) {
    acc = run_stack(spec, nullptr);
  } else {
    std::mt19937_64 rng(spec.seed);
    acc.intensity.assign(spec.n_sites, 0.0);
    acc.flux.assign(spec.n_sites, 0.0);
    acc.log_t.assign(spec.n_sites, 0.0);
    for (int k = 0; k < spec.realizations; ++k) {
      const StackRun r = run_stack(spec, &rng);
      for (int j = 0; j < spec.n_sites; ++j) {
        acc.intensity[j] += r.intensity[j] / spec.realizations;
        acc.flux[j] += r.flux[j] / spec.realizations;
        acc.log_t[j] += r.log_t[j] / spec.realizations;
      }
    }
  }
  const double b1 = 1.0 / std::norm(1.0 - kI * spec.beta1);
  const double slope = -std::log(b1);
  std::vector<FreeSpaceRow> rows(spec.n_sites);
  for (int j = 0; j < spec.n_sites; ++j) {
    FreeSpaceRow& row = rows[j];
    row.layer = j + 1;
    row.intensity = acc.intensity[j];
    row.flux = acc.flux[j];
    row.transmission = std::exp(acc.log_t[j]);
    row.beer = std::pow(b1, j + 1);
    row.ohm = 1.0 / (1.0 + slope * (j + 1));
  }
  return rows;
}

FreeSpaceSpec free_space_spec(const RunConfig& rc) {
  const DerivedParams d = derive(rc.phys);
  double n1 = d.n1;
  if (rc.intensity.density > 0.0)
    n1 = rc.intensity.density * kPi * rc.phys.waist * rc.phys.waist * 0.5 * rc.phys.lambda_lat;
  FreeSpaceSpec s;
  s.n_sites = rc.phys.n_sites;
  s.beta1 = n1 * d.beta(rc.delta_a);
  s.site_phase = rc.bloch.site_phase ? *rc.bloch.site_phase
                                     : lattice_site_phase(rc.delta_lat, rc.phys.lambda_lat, rc.phys.lambda_a);
  s.disordered = rc.intensity.disordered;
  s.realizations = rc.intensity.realizations;
  s.seed = rc.intensity.seed;
  return s;
}

}  // namespace cavlat
