#include "cavlat/bloch.hpp"
#include "cavlat/csv.hpp"
#include "cavlat/experiments.hpp"
#include "cavlat/scan.hpp"
#include "cavlat/tmm_ring.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>

using namespace cavlat;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::string model;
  std::string geometry;
  std::string out = "-";
  int threads = 1;
  bool free_space = false;
  bool retune = false;
};

RunConfig load(const Options& o) {
  const Config cfg = o.config.empty() ? Config{} : Config::from_file(o.config);
  RunConfig rc = run_config_from(cfg);
  if (!o.model.empty()) rc.model = parse_model(o.model);
  if (!o.geometry.empty()) rc.phys.geometry = parse_geometry(o.geometry);
  if (o.threads < 1) throw ConfigError("--threads must be >= 1");
  return rc;
}

void require_axes(const RunConfig& rc, const char* cmd) {
  if (rc.x.points < 2) throw ConfigError(std::string(cmd) + ": the config must define x_axis, x_range and x_points");
}

void cmd_spectrum(const Options& o) {
  const RunConfig rc = load(o);
  require_axes(rc, "spectrum");
  const SpectrumGrid g = run_scan(rc, o.threads);
  write_to(o.out, [&](std::ostream& os) { write_grid_csv(os, g, rc.phys); });
}

void cmd_avoided(const Options& o) {
  const RunConfig rc = load(o);
  require_axes(rc, "avoided");
  const bool ok = rc.y && ((rc.x.name == "delta_a" && rc.y->name == "delta_ca") ||
                           (rc.x.name == "delta_ca" && rc.y->name == "delta_a"));
  if (!ok) throw ConfigError("avoided: scan axes must be delta_a and delta_ca");
  const SpectrumGrid g = run_scan(rc, o.threads);
  write_to(o.out, [&](std::ostream& os) { write_grid_csv(os, g, rc.phys); });
}

void cmd_intensity(const Options& o) {
  RunConfig rc = load(o);
  if (o.free_space) {
    const auto rows = free_space_intensity(free_space_spec(rc));
    write_to(o.out, [&](std::ostream& os) { write_free_space_csv(os, rows, provenance_lines(rc)); });
    return;
  }
  const DerivedParams d = derive(rc.phys);
  const PointSetting s = resolve_point(rc, rc.x.points >= 2 ? rc.x.min : 0.0, std::nullopt);
  DriveConfig drive;
  drive.delta_c = s.delta_c;
  drive.delta_a = s.delta_a;
  const double site_phase = rc.bloch.site_phase ? *rc.bloch.site_phase
                                                : lattice_site_phase(s.delta_lat, rc.phys.lambda_lat, rc.phys.lambda_a);
  std::vector<ProfileSample> samples;
  if (rc.geometry() == Geometry::Linear) {
    LinearLayout l = make_linear_layout(rc.phys, d, site_phase, s.z0_phase);
    l.n_sublayers = rc.n_sublayers;
    l.length_offset = s.cav_offset;
    if (o.retune) {
      l.length_offset = retune_length(l, d, drive).offset;
      rc.cav_offset = l.length_offset;
    }
    samples = intensity_profile(l, d, drive);
  } else {
    drive.eta_minus = rc.eta_minus_ratio;
    RingLayout l = make_ring_layout(rc.phys, d, site_phase, s.z0_phase);
    l.n_sublayers = rc.n_sublayers;
    samples = ring_intensity_profile(l, d, drive);
  }
  write_to(o.out, [&](std::ostream& os) { write_profile_csv(os, samples, rc.phys.lambda_a, provenance_lines(rc)); });
}

void cmd_bloch(const Options& o) {
  const RunConfig rc = load(o);
  const BlochSettings& b = rc.bloch;
  if (b.t_points < 2) throw ConfigError("bloch: t_points must be >= 2");
  const DerivedParams d = derive(rc.phys);
  const BlochConfig cfg = comb_config(b.j_half, b.stride, rc.phys.n_atoms, b.nu, b.omega_blo, b.comb_half);
  LatticeConfig lat;
  lat.site_phase = b.site_phase ? *b.site_phase
                                : lattice_site_phase(rc.delta_lat, rc.phys.lambda_lat, rc.phys.lambda_a);
  lat.z0_phase = rc.z0_phase;
  DriveConfig drive;
  const PointSetting s = resolve_point(rc, 0.0, std::nullopt);
  drive.delta_c = s.delta_c;
  drive.delta_a = s.delta_a;
  drive.eta_plus = d.eta;
  drive.eta_minus = rc.eta_minus_ratio * d.eta;
  const double t_blo = kTwoPi / b.omega_blo;
  std::vector<double> times(b.t_points);
  for (int i = 0; i < b.t_points; ++i) times[i] = b.periods * t_blo * i / (b.t_points - 1);
  const auto samples = monitor_timeseries(cfg, lat, d, drive, rc.geometry(), times, o.threads);
  write_to(o.out, [&](std::ostream& os) { write_bloch_csv(os, samples, provenance_lines(rc)); });
}

std::string sibling(const std::string& path, const std::string& tag) {
  std::filesystem::path p(path);
  const std::string stem = p.stem().string();
  return (p.parent_path() / (stem + "." + tag + p.extension().string())).string();
}

void cmd_filter(const Options& o) {
  const RunConfig rc = load(o);
  require_axes(rc, "filter");
  const FilterResult r = filter_experiment(rc, rc.filter.n_offsets, rc.filter.r_mir, o.threads);
  const SpectrumGrid free = free_space_map(rc, o.threads);
  write_to(o.out, [&](std::ostream& os) { write_grid_csv(os, r.normalized, rc.phys); });
  if (o.out.empty() || o.out == "-") return;
  for (std::size_t n = 0; n < r.per_offset.size(); ++n)
    write_to(sibling(o.out, "offset" + std::to_string(n + 1)),
             [&](std::ostream& os) { write_grid_csv(os, r.per_offset[n], rc.phys); });
  write_to(sibling(o.out, "free"), [&](std::ostream& os) { write_grid_csv(os, free, rc.phys); });
}

void cmd_compare(const Options& o) {
  const RunConfig rc = load(o);
  require_axes(rc, "compare");
  const ModelComparison cmp = compare_models(rc, o.threads);
  json j;
  j["geometry"] = to_string(rc.geometry());
  j["points"] = cmp.odm.nx() * cmp.odm.ny();
  for (const auto& d : cmp.diffs)
    j["channels"][d.channel] = {{"max_abs", d.max_abs},
                                {"mean_abs", d.mean_abs},
                                {axis_column(rc.x), axis_column_value(rc.x, d.x_at_max, rc.phys)}};
  if (rc.y)
    for (const auto& d : cmp.diffs)
      j["channels"][d.channel][axis_column(*rc.y)] = axis_column_value(*rc.y, d.y_at_max, rc.phys);
  write_to(o.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

void cmd_report(const Options& o) {
  const RunConfig rc = load(o);
  const DerivedParams d = derive(rc.phys);
  const ResonanceShift rs = resonance_shift(d);
  json j;
  j["geometry"] = to_string(rc.geometry());
  j["gamma"] = d.gamma;
  j["kappa"] = d.kappa;
  j["kappa_over_2pi_hz"] = d.kappa / kTwoPi;
  j["fsr_hz"] = d.fsr;
  j["finesse"] = rc.phys.finesse;
  j["r_mir"] = rc.phys.r_mir;
  j["g"] = d.g;
  j["g_over_gamma"] = d.g / d.gamma;
  j["cooperativity"] = d.upsilon;
  j["collective_cooperativity"] = d.upsilon * d.n_atoms;
  j["beta0"] = std::abs(d.beta0);
  j["atoms_per_layer"] = d.n1;
  j["layer_reflectivity"] = d.n1 * std::abs(d.beta0);
  j["optical_density"] = d.od;
  j["eta"] = d.eta;
  j["zbar_m"] = d.zbar;
  j["resonance_shift"] = rs.shift;
  j["resonance_shift_over_2pi_hz"] = rs.shift / kTwoPi;
  j["resonance_shift_over_kappa"] = rs.ratio_to_kappa;
  write_to(o.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cold-atom lattices in linear and ring cavities: open Dicke and transfer matrix models"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "key = value configuration file");
    sub->add_option("--model", o.model, "odm or tmm")->check(CLI::IsMember({"odm", "tmm"}, CLI::ignore_case));
    sub->add_option("--geometry", o.geometry, "linear or ring")->check(CLI::IsMember({"linear", "ring"}, CLI::ignore_case));
    sub->add_option("--out", o.out, "output path, '-' for stdout");
    sub->add_option("--threads", o.threads, "worker threads");
  };
  struct Cmd {
    const char* name;
    const char* help;
    void (*run)(const Options&);
  };
  const Cmd cmds[] = {
      {"spectrum", "T/R/A/phase over a one- or two-axis scan", cmd_spectrum},
      {"avoided", "avoided crossing map over delta_a and delta_ca", cmd_avoided},
      {"intensity", "intracavity (or free-space) intensity profile", cmd_intensity},
      {"bloch", "cavity monitor of Wannier-Bloch oscillations", cmd_bloch},
      {"filter", "cavity-length averaged band filter spectra", cmd_filter},
      {"compare", "difference between the two models on a scan", cmd_compare},
      {"report", "derived parameters and the lattice-induced shift", cmd_report},
  };
  std::vector<std::pair<CLI::App*, void (*)(const Options&)>> subs;
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    common(sub);
    if (std::string(c.name) == "intensity") {
      sub->add_flag("--free-space", o.free_space, "bare lattice without mirrors");
      sub->add_flag("--retune", o.retune, "move the output mirror to maximize transmission first");
    }
    subs.emplace_back(sub, c.run);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    for (const auto& [sub, run] : subs)
      if (sub->parsed()) run(o);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
