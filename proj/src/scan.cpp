#include "cavlat/scan.hpp"

#include "cavlat/parallel.hpp"
#include "cavlat/tmm_ring.hpp"

#include <algorithm>
#include <cmath>

namespace cavlat {

int SpectrumGrid::channel_index(const std::string& name) const {
  for (std::size_t i = 0; i < channels.size(); ++i)
    if (channels[i] == name) return static_cast<int>(i);
  throw ConfigError("grid has no channel '" + name + "'");
}

std::vector<std::string> available_channels(Geometry g) {
  if (g == Geometry::Linear) return {"T_plus", "R_plus", "A", "phase"};
  return {"T_plus", "T_minus", "R_plus", "R_minus", "A", "phase"};
}

double channel_value(const SpectrumPoint& sp, const std::string& name) {
  if (name == "T_plus") return sp.t_plus;
  if (name == "T_minus") return sp.t_minus;
  if (name == "R_plus") return sp.r_plus;
  if (name == "R_minus") return sp.r_minus;
  if (name == "A") return sp.absorption;
  if (name == "phase") return sp.phase;
  throw ConfigError("unknown channel '" + name + "'");
}

PointSetting resolve_point(const RunConfig& rc, double xval, std::optional<double> yval) {
  PointSetting s{rc.delta_c, rc.delta_a, rc.delta_lat, rc.z0_phase, rc.cav_offset};
  std::optional<double> delta_ca = rc.delta_ca;
  bool delta_c_axis = false;
  auto apply = [&](const std::string& name, double v) {
    if (name == "delta_c") s.delta_c = v, delta_c_axis = true;
    else if (name == "delta_a") s.delta_a = v;
    else if (name == "delta_ca") delta_ca = v;
    else if (name == "delta_lat") s.delta_lat = v;
    else if (name == "z0_phase") s.z0_phase = v;
    else if (name == "cav_offset") s.cav_offset = v;
    else throw ConfigError("axis '" + name + "' is only available to the bloch command");
  };
  apply(rc.x.name, xval);
  if (rc.y) apply(rc.y->name, *yval);
  if (delta_ca) {
    if (delta_c_axis) s.delta_a = s.delta_c - *delta_ca;
    else s.delta_c = s.delta_a + *delta_ca;
  }
  return s;
}

namespace {

std::vector<double> site_phases(const LatticeConfig& lat) {
  std::vector<double> ph;
  ph.reserve(lat.n_sites);
  for (int j = lat.j_min(); j <= lat.j_max(); ++j) ph.push_back(lat.phase_of(j));
  return ph;
}

SpectrumPoint evaluate_odm(const RunConfig& rc, const DerivedParams& d, const PointSetting& s, double site_phase) {
  if (s.cav_offset != 0.0) throw ConfigError("cav_offset needs the transfer matrix model");
  if (!std::isfinite(d.kappa)) throw ConfigError("the open Dicke model needs a finite kappa (r_mir > 0)");
  const Geometry g = rc.geometry();
  LatticeConfig lat;
  lat.n_sites = rc.phys.n_sites;
  lat.site_phase = site_phase;
  lat.z0_phase = s.z0_phase;
  lat.kzbar = d.k * d.zbar;

  DriveConfig drive;
  drive.delta_c = s.delta_c;
  drive.delta_a = s.delta_a;
  drive.eta_plus = d.eta;
  drive.eta_minus = g == Geometry::Ring ? rc.eta_minus_ratio * d.eta : cplx{};

  if (rc.nonlinear) {
    if (lat.kzbar > 0.0) throw ConfigError("the saturating solver expects a cold lattice (temp = 0)");
    const std::vector<double> ph = site_phases(lat);
    const std::vector<double> w(ph.size(), d.n1);
    return spectra_odm(solve_nonlinear(d, drive, ph, w, g).state, drive, d, g);
  }
  const Bunching b = bunching_thermal(lat);
  const SteadyState st = g == Geometry::Linear ? steady_linear(d, drive, b.b0, d.n_atoms)
                                               : steady_ring(d, drive, b.b_plus, d.n_atoms);
  return spectra_odm(st, drive, d, g);
}

SpectrumPoint evaluate_tmm(const RunConfig& rc, const DerivedParams& d, const PointSetting& s, double site_phase) {
  if (rc.nonlinear) throw ConfigError("nonlinear = true is only supported by the open Dicke model");
  DriveConfig drive;
  drive.delta_c = s.delta_c;
  drive.delta_a = s.delta_a;
  drive.eta_plus = 1.0;
  if (rc.geometry() == Geometry::Linear) {
    LinearLayout l = make_linear_layout(rc.phys, d, site_phase, s.z0_phase);
    l.length_offset = s.cav_offset;
    l.n_sublayers = rc.n_sublayers;
    return spectrum_point_linear(l, d, drive);
  }
  if (s.cav_offset != 0.0) throw ConfigError("cav_offset is only supported for the linear cavity");
  drive.eta_minus = rc.eta_minus_ratio;
  RingLayout l = make_ring_layout(rc.phys, d, site_phase, s.z0_phase);
  l.n_sublayers = rc.n_sublayers;
  return spectrum_point_ring(l, d, drive);
}

}  // namespace

SpectrumPoint evaluate_point(const RunConfig& rc, const DerivedParams& d, Model model, const PointSetting& s) {
  const double site_phase = rc.bloch.site_phase
                                ? *rc.bloch.site_phase
                                : lattice_site_phase(s.delta_lat, rc.phys.lambda_lat, rc.phys.lambda_a);
  return model == Model::ODM ? evaluate_odm(rc, d, s, site_phase) : evaluate_tmm(rc, d, s, site_phase);
}

SpectrumGrid run_scan(const RunConfig& rc, int threads) { return run_scan(rc, rc.model, threads); }

SpectrumGrid run_scan(const RunConfig& rc, Model model, int threads) {
  if (rc.x.name == "time" || (rc.y && rc.y->name == "time"))
    throw ConfigError("the time axis needs the bloch command");
  const DerivedParams d = derive(rc.phys);

  SpectrumGrid grid;
  grid.x = rc.x;
  grid.y = rc.y;
  const auto avail = available_channels(rc.geometry());
  grid.channels = rc.channels.empty() ? avail : rc.channels;
  for (const auto& ch : grid.channels)
    if (std::find(avail.begin(), avail.end(), ch) == avail.end())
      throw ConfigError("channel '" + ch + "' is not produced for the " + to_string(rc.geometry()) + " cavity");
  RunConfig resolved = rc;
  resolved.model = model;
  resolved.channels = grid.channels;
  grid.provenance = provenance_lines(resolved);

  const int nx = grid.nx(), ny = grid.ny();
  const std::size_t n = static_cast<std::size_t>(nx) * ny;
  grid.values.assign(grid.channels.size(), std::vector<double>(n, 0.0));
  parallel_for(n, threads, [&](std::size_t i) {
    const int ix = static_cast<int>(i % nx), iy = static_cast<int>(i / nx);
    const std::optional<double> yv = rc.y ? std::optional<double>(rc.y->at(iy)) : std::nullopt;
    const SpectrumPoint sp = evaluate_point(rc, d, model, resolve_point(rc, rc.x.at(ix), yv));
    for (std::size_t c = 0; c < grid.channels.size(); ++c) grid.values[c][i] = channel_value(sp, grid.channels[c]);
  });
  return grid;
}

const ChannelDiff& ModelComparison::diff(const std::string& channel) const {
  for (const auto& d : diffs)
    if (d.channel == channel) return d;
  throw ConfigError("comparison has no channel '" + channel + "'");
}

ModelComparison compare_models(const RunConfig& rc, int threads) {
  ModelComparison out;
  out.odm = run_scan(rc, Model::ODM, threads);
  out.tmm = run_scan(rc, Model::TMM, threads);
  const int nx = out.odm.nx();
  for (std::size_t c = 0; c < out.odm.channels.size(); ++c) {
    ChannelDiff cd;
    cd.channel = out.odm.channels[c];
    const auto& a = out.odm.values[c];
    const auto& b = out.tmm.values[c];
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      double diff = std::abs(a[i] - b[i]);
      if (cd.channel == "phase") diff = std::abs(std::remainder(a[i] - b[i], kTwoPi));
      sum += diff;
      if (diff > cd.max_abs) {
        cd.max_abs = diff;
        cd.x_at_max = rc.x.at(static_cast<int>(i % nx));
        cd.y_at_max = rc.y ? rc.y->at(static_cast<int>(i / nx)) : 0.0;
      }
    }
    cd.mean_abs = a.empty() ? 0.0 : sum / a.size();
    out.diffs.push_back(cd);
  }
  return out;
}

}  // namespace cavlat
