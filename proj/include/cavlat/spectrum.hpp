#pragma once

namespace cavlat {

// Observables normalized to the pump into the + mode. For the linear cavity
// t_minus and r_minus stay zero.
struct SpectrumPoint {
  double t_plus = 0.0;
  double t_minus = 0.0;
  double r_plus = 0.0;
  double r_minus = 0.0;
  double absorption = 0.0;
  double phase = 0.0;   // arg of the transmitted + amplitude, in (-pi, pi]
};

}  // namespace cavlat
