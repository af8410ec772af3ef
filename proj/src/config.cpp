#include "cavlat/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cavlat {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

Config Config::from_string(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  const bool provenance = std::any_of(lines.begin(), lines.end(),
                                      [](const std::string& l) { return trim(l).rfind("#!", 0) == 0; });
  Config cfg;
  int lineno = 0;
  for (std::string line : lines) {
    ++lineno;
    line = trim(line);
    if (provenance) {
      if (line.rfind("#!", 0) != 0) continue;
      line = trim(line.substr(2));
    } else {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = trim(line.substr(0, hash));
    }
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key)) throw ConfigError("config: duplicate key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

std::optional<std::string> Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  touched_[key] = true;
  return it->second;
}

namespace {

struct Scaled {
  std::string key;
  std::string text;
  double factor;
};

std::optional<Scaled> pick_scaled(const Config& c, const std::string& key, double gamma, double fsr) {
  std::optional<Scaled> found;
  auto consider = [&](const std::string& k, double factor, const char* needs) {
    if (!c.has(k)) return;
    if (found) throw ConfigError("config: '" + found->key + "' and '" + k + "' both given");
    if (!(factor > 0.0)) throw ConfigError(std::string("config: '") + k + "' needs " + needs);
    found = Scaled{k, *c.get(k), factor};
  };
  consider(key, 1.0, "");
  consider(key + "_over_gamma", gamma, "gamma");
  consider(key + "_over_fsr", kTwoPi * fsr, "fsr");
  return found;
}

}  // namespace

std::optional<double> Config::number(const std::string& key, double gamma, double fsr) const {
  const auto s = pick_scaled(*this, key, gamma, fsr);
  if (!s) return std::nullopt;
  return parse_double(s->key, s->text) * s->factor;
}

std::optional<std::vector<double>> Config::numbers(const std::string& key, double gamma, double fsr) const {
  const auto s = pick_scaled(*this, key, gamma, fsr);
  if (!s) return std::nullopt;
  std::vector<double> out;
  for (const auto& item : split_list(s->text)) out.push_back(parse_double(s->key, item) * s->factor);
  return out;
}

std::vector<std::string> Config::unused() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!touched_.count(k)) out.push_back(k);
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
  if (!std::isfinite(v) && t != "inf") throw ConfigError("config: '" + key + "' is not finite");
  return v;
}

long parse_int(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e15) throw ConfigError("config: '" + key + "' expects an integer");
  return static_cast<long>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("config: '" + key + "' expects true/false, got '" + text + "'");
}

bool is_axis_name(const std::string& n) {
  static const char* names[] = {"delta_c", "delta_a", "delta_ca", "delta_lat", "time", "z0_phase", "cav_offset"};
  return std::any_of(std::begin(names), std::end(names), [&](const char* s) { return n == s; });
}

namespace {

ScanAxis read_axis(const Config& c, const std::string& prefix, double gamma, double fsr) {
  ScanAxis ax;
  ax.name = *c.get(prefix + "_axis");
  if (!is_axis_name(ax.name)) throw ConfigError("config: unknown axis '" + ax.name + "'");
  const auto range = c.numbers(prefix + "_range", gamma, fsr);
  if (!range || range->size() != 2) throw ConfigError("config: '" + prefix + "_range' needs 'min, max'");
  ax.min = (*range)[0];
  ax.max = (*range)[1];
  const auto pts = c.get(prefix + "_points");
  if (!pts) throw ConfigError("config: '" + prefix + "_points' missing");
  ax.points = static_cast<int>(parse_int(prefix + "_points", *pts));
  if (ax.points < 2) throw ConfigError("config: '" + prefix + "_points' must be >= 2");
  return ax;
}

}  // namespace

RunConfig run_config_from(const Config& c) {
  RunConfig rc;
  PhysParams& p = rc.phys;
  auto num = [&](const std::string& k, double& target, bool scaled = false) {
    if (auto v = scaled ? c.number(k, p.gamma, p.fsr) : c.number(k)) target = *v;
  };

  if (auto v = c.get("geometry")) p.geometry = parse_geometry(*v);
  if (auto v = c.get("model")) rc.model = parse_model(*v);
  c.get("code_version");

  num("gamma", p.gamma);
  if (!(p.gamma > 0.0)) throw ConfigError("gamma must be > 0");
  num("waist", p.waist);
  num("lambda_a", p.lambda_a);
  num("lambda_lat", p.lambda_lat);
  num("n_atoms", p.n_atoms);
  if (auto v = c.get("n_sites")) p.n_sites = static_cast<int>(parse_int("n_sites", *v));
  num("r_ls", p.r_ls);
  num("alpha_in", p.alpha_in);
  num("temp", p.temp);
  num("v0", p.v0);
  num("rabi", p.rabi, true);
  if (auto g = c.number("g", p.gamma)) p.g_override = *g;

  CavityInputs cav;
  cav.fsr = c.number("fsr");
  cav.kappa = c.number("kappa", p.gamma);
  cav.finesse = c.number("finesse");
  cav.r_mir = c.number("r_mir");
  if (!cav.fsr) cav.fsr = p.fsr;
  if (!cav.kappa && !cav.finesse && !cav.r_mir) cav.kappa = p.kappa;
  resolve_cavity(p, cav);
  p.validate();

  num("delta_c", rc.delta_c, true);
  num("delta_a", rc.delta_a, true);
  rc.delta_ca = c.number("delta_ca", p.gamma, p.fsr);
  num("delta_lat", rc.delta_lat, true);
  num("z0_phase", rc.z0_phase);
  num("cav_offset", rc.cav_offset);
  double em = 0.0, em_phase = 0.0;
  num("eta_minus", em);
  num("eta_minus_phase", em_phase);
  rc.eta_minus_ratio = std::polar(em, em_phase);
  if (auto v = c.get("nonlinear")) rc.nonlinear = parse_bool("nonlinear", *v);
  if (auto v = c.get("n_sublayers")) rc.n_sublayers = static_cast<int>(parse_int("n_sublayers", *v));
  if (rc.n_sublayers < 1) throw ConfigError("n_sublayers must be >= 1");

  if (c.has("x_axis")) rc.x = read_axis(c, "x", p.gamma, p.fsr);
  if (c.has("y_axis")) {
    if (!c.has("x_axis")) throw ConfigError("config: y_axis given without x_axis");
    rc.y = read_axis(c, "y", p.gamma, p.fsr);
    if (rc.y->name == rc.x.name) throw ConfigError("config: x_axis and y_axis must differ");
  }
  if (auto v = c.get("channels")) rc.channels = split_list(*v);

  BlochSettings& b = rc.bloch;
  num("nu", b.nu);
  num("omega_blo", b.omega_blo);
  if (auto v = c.get("j_half")) b.j_half = static_cast<int>(parse_int("j_half", *v));
  if (auto v = c.get("comb_stride")) b.stride = static_cast<int>(parse_int("comb_stride", *v));
  if (auto v = c.get("comb_half")) b.comb_half = static_cast<int>(parse_int("comb_half", *v));
  num("periods", b.periods);
  if (auto v = c.get("t_points")) b.t_points = static_cast<int>(parse_int("t_points", *v));
  b.site_phase = c.number("site_phase");

  if (auto v = c.get("n_offsets")) rc.filter.n_offsets = static_cast<int>(parse_int("n_offsets", *v));
  num("filter_r_mir", rc.filter.r_mir);
  if (rc.filter.n_offsets < 1) throw ConfigError("n_offsets must be >= 1");
  if (!(rc.filter.r_mir >= 0.0 && rc.filter.r_mir < 1.0)) throw ConfigError("filter_r_mir must lie in [0,1)");

  if (auto v = c.get("disordered")) rc.intensity.disordered = parse_bool("disordered", *v);
  if (auto v = c.get("realizations")) rc.intensity.realizations = static_cast<int>(parse_int("realizations", *v));
  if (auto v = c.get("seed")) rc.intensity.seed = static_cast<std::uint64_t>(parse_int("seed", *v));
  num("density", rc.intensity.density);

  const auto extra = c.unused();
  if (!extra.empty()) throw ConfigError("config: unknown key '" + extra.front() + "'");
  return rc;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> provenance_lines(const RunConfig& rc) {
  const PhysParams& p = rc.phys;
  std::vector<std::string> out;
  auto put = [&](const std::string& k, const std::string& v) { out.push_back("#! " + k + " = " + v); };
  auto num = [&](const std::string& k, double v) { put(k, format_double(v)); };
  put("code_version", CAVLAT_VERSION);
  put("model", to_string(rc.model));
  put("geometry", to_string(p.geometry));
  num("gamma", p.gamma);
  num("fsr", p.fsr);
  num("kappa", p.kappa);
  num("r_mir", p.r_mir);
  num("waist", p.waist);
  num("lambda_a", p.lambda_a);
  num("lambda_lat", p.lambda_lat);
  num("n_atoms", p.n_atoms);
  put("n_sites", std::to_string(p.n_sites));
  num("r_ls", p.r_ls);
  num("alpha_in", p.alpha_in);
  num("temp", p.temp);
  num("v0", p.v0);
  num("rabi", p.rabi);
  if (p.g_override) num("g", *p.g_override);
  num("delta_c", rc.delta_c);
  num("delta_a", rc.delta_a);
  if (rc.delta_ca) num("delta_ca", *rc.delta_ca);
  num("delta_lat", rc.delta_lat);
  num("z0_phase", rc.z0_phase);
  num("cav_offset", rc.cav_offset);
  num("eta_minus", std::abs(rc.eta_minus_ratio));
  num("eta_minus_phase", std::arg(rc.eta_minus_ratio));
  put("nonlinear", rc.nonlinear ? "true" : "false");
  put("n_sublayers", std::to_string(rc.n_sublayers));
  auto axis = [&](const std::string& pre, const ScanAxis& a) {
    put(pre + "_axis", a.name);
    put(pre + "_range", format_double(a.min) + ", " + format_double(a.max));
    put(pre + "_points", std::to_string(a.points));
  };
  if (rc.x.points >= 2) axis("x", rc.x);
  if (rc.y) axis("y", *rc.y);
  if (!rc.channels.empty()) {
    std::string s;
    for (const auto& ch : rc.channels) s += (s.empty() ? "" : ", ") + ch;
    put("channels", s);
  }
  num("nu", rc.bloch.nu);
  num("omega_blo", rc.bloch.omega_blo);
  put("j_half", std::to_string(rc.bloch.j_half));
  put("comb_stride", std::to_string(rc.bloch.stride));
  put("comb_half", std::to_string(rc.bloch.comb_half));
  num("periods", rc.bloch.periods);
  put("t_points", std::to_string(rc.bloch.t_points));
  if (rc.bloch.site_phase) num("site_phase", *rc.bloch.site_phase);
  put("n_offsets", std::to_string(rc.filter.n_offsets));
  num("filter_r_mir", rc.filter.r_mir);
  put("disordered", rc.intensity.disordered ? "true" : "false");
  put("realizations", std::to_string(rc.intensity.realizations));
  put("seed", std::to_string(rc.intensity.seed));
  num("density", rc.intensity.density);
  return out;
}

}  // namespace cavlat
