#pragma once

#include "cavlat/tmm_linear.hpp"

namespace cavlat {

// Ring resonator unrolled on 0 <= z <= length, "+" running clockwise.
// Point 1 (z = 0) is just behind the input coupler; then a free path d, the
// loss element, the gap a, the lattice, a second gap, the output coupler and
// the second loss element at z = length - d, and the free path d back to the
// input coupler.
struct RingLayout {
  LatticeConfig lattice;
  double length = 0.0;   // round trip, c / fsr
  double period = 0.0;
  double k = 0.0;
  double d = 0.0;
  double r_ic = 0.0;     // amplitude coefficients
  double r_hr = 0.0;
  double r_ls = 1.0;
  double atoms_per_site = 0.0;
  int n_sublayers = 30;

  double t_ic() const { return std::sqrt(1.0 - r_ic * r_ic); }
  double t_hr() const { return std::sqrt(1.0 - r_hr * r_hr); }
  double gap() const { return 0.5 * (length - 2.0 * d - lattice.n_sites * period); }
  void validate() const;
};

RingLayout make_ring_layout(const PhysParams& p, const DerivedParams& d, double site_phase,
                            double z0_phase = 0.0);

// Transfer elements from point 1 to point 6; the output coupler appears as
// an element of kind Mirror.
std::vector<ChainElement> ring_chain(const RingLayout& layout, cplx beta_atom, double delta_c);

struct RingMatrices {
  Mat2 to_output;   // point 1 -> point 4 (just before the output coupler)
  Mat2 roundtrip;   // point 1 -> point 6
};

RingMatrices roundtrip(const RingLayout& layout, cplx beta_atom, double delta_c);

// Maps the incident pair onto the amplitudes at point 1. r must be a
// unimodular round-trip matrix.
Mat2 y_matrix(const Mat2& r, double r_ic, double t_ic);

// Maps the incident pair onto the pair reflected at the input coupler.
Mat2 x_matrix(const Mat2& r, const Mat2& y, double r_ic, double t_ic);

struct RingOutputs {
  AmpPair transmitted;
  AmpPair reflected;
  AmpPair at_point1;
};

RingOutputs ring_outputs(const RingLayout& layout, const DerivedParams& d, const DriveConfig& drive);

SpectrumPoint spectrum_point_ring(const RingLayout& layout, const DerivedParams& d, const DriveConfig& drive);

AmpPair ring_field_at(const RingLayout& layout, const DerivedParams& d, const DriveConfig& drive, double z);

// Fields at every element boundary of the round trip from one solve; sheets
// report the field just before them together with their atom number.
std::vector<ProfileSample> ring_intensity_profile(const RingLayout& layout, const DerivedParams& d,
                                                  const DriveConfig& drive);

std::vector<SheetSample> ring_sheet_samples(const RingLayout& layout, const DerivedParams& d,
                                            const DriveConfig& drive);

}  // namespace cavlat
