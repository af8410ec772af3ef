#include "cavlat/csv.hpp"

#include "cavlat/config.hpp"

#include <fstream>
#include <iostream>

namespace cavlat {

namespace {

void header(std::ostream& os, const std::vector<std::string>& provenance) {
  for (const auto& line : provenance) os << line << '\n';
}

bool is_detuning(const std::string& n) { return n == "delta_c" || n == "delta_a" || n == "delta_ca"; }

}  // namespace

std::string axis_column(const ScanAxis& ax) {
  if (is_detuning(ax.name)) return ax.name + "_over_gamma";
  if (ax.name == "delta_lat") return "delta_lat_over_fsr";
  if (ax.name == "time") return "t_over_tblo";
  return ax.name;
}

double axis_column_value(const ScanAxis& ax, double v, const PhysParams& p) {
  if (is_detuning(ax.name)) return v / p.gamma;
  if (ax.name == "delta_lat") return v / (kTwoPi * p.fsr);
  return v;
}

void write_grid_csv(std::ostream& os, const SpectrumGrid& g, const PhysParams& p) {
  header(os, g.provenance);
  os << axis_column(g.x);
  if (g.y) os << ',' << axis_column(*g.y);
  for (const auto& c : g.channels) os << ',' << c;
  os << '\n';
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      os << format_double(axis_column_value(g.x, g.x.at(ix), p));
      if (g.y) os << ',' << format_double(axis_column_value(*g.y, g.y->at(iy), p));
      const std::size_t i = static_cast<std::size_t>(iy) * g.nx() + ix;
      for (const auto& ch : g.values) os << ',' << format_double(ch[i]);
      os << '\n';
    }
}

void write_profile_csv(std::ostream& os, const std::vector<ProfileSample>& samples, double lambda,
                       const std::vector<std::string>& provenance) {
  header(os, provenance);
  os << "z_over_lambda,abs_ap2,abs_am2,abs_sum2,flux,density_weight\n";
  for (const auto& s : samples)
    os << format_double(s.z / lambda) << ',' << format_double(std::norm(s.field.plus)) << ','
       << format_double(std::norm(s.field.minus)) << ',' << format_double(std::norm(s.field.sum())) << ','
       << format_double(s.field.flux()) << ',' << format_double(s.density) << '\n';
}

void write_bloch_csv(std::ostream& os, const std::vector<MonitorSample>& samples,
                     const std::vector<std::string>& provenance) {
  header(os, provenance);
  os << "t_over_Tblo,b0_or_abs_bplus,N_eff,T_plus,T_minus\n";
  for (const auto& s : samples)
    os << format_double(s.t_over_tblo) << ',' << format_double(s.b) << ',' << format_double(s.n_eff) << ','
       << format_double(s.spectrum.t_plus) << ',' << format_double(s.spectrum.t_minus) << '\n';
}

void write_free_space_csv(std::ostream& os, const std::vector<FreeSpaceRow>& rows,
                          const std::vector<std::string>& provenance) {
  header(os, provenance);
  os << "layer,intensity,flux,transmission,beer,ohm\n";
  for (const auto& r : rows)
    os << r.layer << ',' << format_double(r.intensity) << ',' << format_double(r.flux) << ','
       << format_double(r.transmission) << ',' << format_double(r.beer) << ',' << format_double(r.ohm) << '\n';
}

void write_to(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  body(out);
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace cavlat
