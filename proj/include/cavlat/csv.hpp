#pragma once

#include "cavlat/bloch.hpp"
#include "cavlat/experiments.hpp"
#include "cavlat/scan.hpp"
#include "cavlat/tmm_linear.hpp"

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace cavlat {

// Axis column label and the value written for it: detunings in units of
// gamma, delta_lat in units of 2 pi fsr, phases and lengths unchanged.
std::string axis_column(const ScanAxis& ax);
double axis_column_value(const ScanAxis& ax, double v, const PhysParams& p);

// Long format: provenance header, column header, one row per grid point
// with x varying fastest.
void write_grid_csv(std::ostream& os, const SpectrumGrid& g, const PhysParams& p);

void write_profile_csv(std::ostream& os, const std::vector<ProfileSample>& samples, double lambda,
                       const std::vector<std::string>& provenance);
void write_bloch_csv(std::ostream& os, const std::vector<MonitorSample>& samples,
                     const std::vector<std::string>& provenance);
void write_free_space_csv(std::ostream& os, const std::vector<FreeSpaceRow>& rows,
                          const std::vector<std::string>& provenance);

// Writes to a file, or to stdout for "-".
void write_to(const std::string& path, const std::function<void(std::ostream&)>& body);

}  // namespace cavlat
