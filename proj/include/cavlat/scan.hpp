#pragma once

#include "cavlat/config.hpp"
#include "cavlat/spectrum.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cavlat {

// Rectangular result: values[c][iy * nx + ix] for channel c.
struct SpectrumGrid {
  ScanAxis x;
  std::optional<ScanAxis> y;
  std::vector<std::string> channels;
  std::vector<std::vector<double>> values;
  std::vector<std::string> provenance;

  int nx() const { return x.points; }
  int ny() const { return y ? y->points : 1; }
  int channel_index(const std::string& name) const;
  const std::vector<double>& channel(const std::string& name) const { return values.at(channel_index(name)); }
  double at(const std::string& name, int ix, int iy) const { return channel(name)[iy * nx() + ix]; }
};

// All channel names a geometry can produce, and the defaults emitted.
std::vector<std::string> available_channels(Geometry g);

// Detunings and lattice variables at one grid point, after applying the
// axis overrides and the delta_ca coupling.
struct PointSetting {
  double delta_c = 0.0;
  double delta_a = 0.0;
  double delta_lat = 0.0;
  double z0_phase = 0.0;
  double cav_offset = 0.0;
};

PointSetting resolve_point(const RunConfig& rc, double xval, std::optional<double> yval);

SpectrumPoint evaluate_point(const RunConfig& rc, const DerivedParams& d, Model model, const PointSetting& s);

double channel_value(const SpectrumPoint& sp, const std::string& name);

SpectrumGrid run_scan(const RunConfig& rc, int threads = 1);
SpectrumGrid run_scan(const RunConfig& rc, Model model, int threads);

struct ChannelDiff {
  std::string channel;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double x_at_max = 0.0;
  double y_at_max = 0.0;
};

struct ModelComparison {
  SpectrumGrid odm;
  SpectrumGrid tmm;
  std::vector<ChannelDiff> diffs;

  const ChannelDiff& diff(const std::string& channel) const;
};

ModelComparison compare_models(const RunConfig& rc, int threads = 1);

}  // namespace cavlat
