#pragma once

#include "cavlat/params.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cavlat {

// Flat "key = value" configuration. '#' starts a comment. If any line starts
// with "#!" (a provenance header written by the CLI), only those lines are
// read, so a result file can be fed back as a configuration.
class Config {
public:
  static Config from_string(const std::string& text);
  static Config from_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& values() const { return values_; }

  // Reads `key`, `key_over_gamma` (times gamma) or `key_over_fsr`
  // (times 2 pi fsr); at most one of them may be present.
  std::optional<double> number(const std::string& key, double gamma = 0.0, double fsr = 0.0) const;
  std::optional<std::vector<double>> numbers(const std::string& key, double gamma = 0.0, double fsr = 0.0) const;

  // Keys the caller never looked at; used to reject typos.
  std::vector<std::string> unused() const;

private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> touched_;
};

double parse_double(const std::string& key, const std::string& text);
long parse_int(const std::string& key, const std::string& text);
bool parse_bool(const std::string& key, const std::string& text);

struct ScanAxis {
  std::string name;     // delta_c, delta_a, delta_ca, delta_lat, time, z0_phase, cav_offset
  double min = 0.0;
  double max = 0.0;
  int points = 1;

  double at(int i) const { return points == 1 ? min : min + (max - min) * i / (points - 1); }
};

bool is_axis_name(const std::string& name);

struct BlochSettings {
  double nu = 8.0;
  double omega_blo = kTwoPi;
  int j_half = 40;
  int stride = 4;
  int comb_half = -1;   // populated range |j| <= comb_half; negative means all of j_half
  double periods = 2.0;
  int t_points = 201;
  std::optional<double> site_phase;   // overrides the lattice-derived phase
};

struct FilterSettings {
  int n_offsets = 7;
  double r_mir = 0.8;
};

struct IntensitySettings {
  bool disordered = false;
  int realizations = 64;
  std::uint64_t seed = 1;
  double density = 0.0;   // atoms per m^3 for the free-space stack; 0 keeps n_atoms / n_sites
};

// Everything a CLI run needs, with detunings resolved to rad/s.
struct RunConfig {
  PhysParams phys;
  Model model = Model::ODM;
  double delta_c = 0.0;
  double delta_a = 0.0;
  std::optional<double> delta_ca;
  double delta_lat = 0.0;
  double z0_phase = 0.0;
  double cav_offset = 0.0;
  cplx eta_minus_ratio{};   // eta- / eta+
  bool nonlinear = false;
  int n_sublayers = 30;
  ScanAxis x{"delta_c", 0.0, 0.0, 1};
  std::optional<ScanAxis> y;
  std::vector<std::string> channels;
  BlochSettings bloch;
  FilterSettings filter;
  IntensitySettings intensity;

  Geometry geometry() const { return phys.geometry; }
};

RunConfig run_config_from(const Config& cfg);

// "#! key = value" lines that reproduce the run when read back.
std::vector<std::string> provenance_lines(const RunConfig& rc);

std::string format_double(double v);

}  // namespace cavlat
