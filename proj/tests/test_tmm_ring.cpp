#include "cavlat/tmm_ring.hpp"

#include <doctest.h>

#include <cmath>

using namespace cavlat;

namespace {

struct Setup {
  PhysParams p;
  DerivedParams d;
  RingLayout layout;
};

Setup setup(double r_mir, double n_atoms, int n_sites, double site_phase = kPi) {
  Setup s;
  s.p.geometry = Geometry::Ring;
  s.p.fsr = 1e6 * s.p.gamma / kTwoPi;
  s.p.r_mir = r_mir;
  s.p.kappa = kappa_from_mirrors(s.p.fsr, r_mir, 1.0);
  s.p.finesse = kPi * s.p.fsr / s.p.kappa;
  s.p.n_atoms = n_atoms;
  s.p.n_sites = n_sites;
  s.p.g_override = s.p.gamma;
  s.d = derive(s.p);
  s.layout = make_ring_layout(s.p, s.d, site_phase);
  return s;
}

DriveConfig drive_at(double dc, double da, cplx ep = 1.0, cplx em = 0.0) {
  DriveConfig d;
  d.delta_c = dc;
  d.delta_a = da;
  d.eta_plus = ep;
  d.eta_minus = em;
  return d;
}

}  // namespace

TEST_CASE("ring round trip") {
  Setup s = setup(0.95, 0.0, 300);
  // The round trip includes the output coupler diag(-r_hr, -1/r_hr).
  SUBCASE("empty lossless ring is diagonal") {
    const RingMatrices m = roundtrip(s.layout, 0.0, 0.37 * s.p.gamma);
    CHECK(std::abs(m.roundtrip.m12) == 0.0);
    CHECK(std::abs(m.roundtrip.m21) == 0.0);
    CHECK(std::abs(std::abs(m.roundtrip.m11) - s.layout.r_hr) < 1e-14);
    CHECK(std::abs(m.roundtrip.det() - 1.0) < 1e-13);
    CHECK(std::abs(m.to_output.det() - 1.0) < 1e-13);
    CHECK(std::abs(std::abs(m.to_output.m11) - 1.0) < 1e-14);
  }
  SUBCASE("two loss passes") {
    s.layout.r_ls = 0.9;
    const RingMatrices m = roundtrip(s.layout, 0.0, 0.37 * s.p.gamma);
    CHECK(std::abs(m.roundtrip.m12) == 0.0);
    CHECK(std::abs(std::abs(m.roundtrip.m11) - 0.81 * s.layout.r_hr) < 1e-14);
    CHECK(std::abs(std::abs(m.roundtrip.m22) - 1.0 / (0.81 * s.layout.r_hr)) < 1e-13);
  }
  SUBCASE("backscattering needs a bunched lattice") {
    // weak layers, so that multiple scattering stays below first order
    s.layout.atoms_per_site = 0.03;
    const cplx beta(1e-5, 2e-6);
    const RingMatrices bunched = roundtrip(s.layout, beta, 0.0);
    CHECK(std::abs(bunched.roundtrip.m12) > 1e-5);
    CHECK(std::abs(bunched.roundtrip.m21) > 1e-5);
    // sin(N x) / (N sin x) vanishes for N x = pi
    s.layout.lattice.site_phase = kPi * (1.0 + 1.0 / 300.0);
    const RingMatrices flat = roundtrip(s.layout, beta, 0.0);
    CHECK(std::abs(flat.roundtrip.m12) < 1e-3 * std::abs(bunched.roundtrip.m12));
  }
}

TEST_CASE("ring input matrix") {
  Setup s = setup(0.95, 2e5, 300);
  const cplx beta = s.d.beta(3 * s.p.gamma);
  const RingMatrices m = roundtrip(s.layout, beta, 0.0);
  SUBCASE("no input coupler") {
    const Mat2 y = y_matrix(m.roundtrip, 0.0, 1.0);
    CHECK(std::abs(y.m11 - 1.0) < 1e-14);
    CHECK(std::abs(y.m12) < 1e-14);
  }
  SUBCASE("decoupled modes give a diagonal matrix") {
    const Mat2 y = y_matrix(Mat2::diag(std::polar(0.8, 0.3), std::polar(1.25, -0.3)), 0.9, std::sqrt(1 - 0.81));
    CHECK(std::abs(y.m12) == 0.0);
    CHECK(std::abs(y.m21) == 0.0);
  }
  SUBCASE("empty ring buildup") {
    Setup e = setup(0.95, 0.0, 300);
    e.layout.r_ls = 0.99;
    const double r = e.layout.r_ic, t = e.layout.t_ic();
    for (double x : {0.0, 0.01, 0.2}) {
      const double dc = x * kTwoPi * e.p.fsr;
      const RingMatrices em = roundtrip(e.layout, 0.0, dc);
      const Mat2 y = y_matrix(em.roundtrip, r, t);
      const double g = r * e.layout.r_hr * 0.99 * 0.99;
      CHECK(std::abs(y.m11) == doctest::Approx(t / std::abs(1.0 - g * std::polar(1.0, dc / e.p.fsr))).epsilon(1e-12));
    }
  }
  SUBCASE("singular cavity") {
    CHECK_THROWS_AS(y_matrix(Mat2::diag(-1.0, -1.0), 1.0, 0.0), NumericalError);
    s.layout.r_hr = 0.0;
    CHECK_THROWS_AS(roundtrip(s.layout, beta, 0.0), NumericalError);
  }
}

TEST_CASE("ring outputs") {
  SUBCASE("empty ring against the geometric series") {
    Setup e = setup(0.95, 0.0, 300);
    const double g = e.layout.r_ic * e.layout.r_hr;
    const double tt = (1 - e.layout.r_ic * e.layout.r_ic) * (1 - e.layout.r_hr * e.layout.r_hr);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double dc = (-1.5 + 3.0 * i / 999.0) * kTwoPi * e.p.fsr;
      const SpectrumPoint sp = spectrum_point_ring(e.layout, e.d, drive_at(dc, 0.0));
      const double want = tt / std::norm(1.0 - g * std::polar(1.0, dc / e.p.fsr));
      worst = std::max(worst, std::abs(sp.t_plus - want));
      CHECK(std::abs(sp.t_plus + sp.r_plus - 1.0) < 1e-12);
      CHECK(sp.t_minus == 0.0);
      CHECK(sp.r_minus == 0.0);
    }
    CHECK(worst < 1e-10);
  }
  SUBCASE("unbunched lattice does not backscatter") {
    // At low optical density; strong absorption makes the intensity itself
    // nonuniform along the stack, which backscatters on its own.
    Setup s = setup(0.95, 50.0, 300, kPi * (1.0 + 1.0 / 300.0));
    for (double x : {-20.0, 0.0, 5.0}) {
      const RingOutputs o = ring_outputs(s.layout, s.d, drive_at(x * s.p.gamma, x * s.p.gamma));
      CHECK(std::abs(o.transmitted.minus) < 1e-3 * std::abs(o.transmitted.plus));
    }
  }
  SUBCASE("symmetric pump of a centred lattice") {
    // Mirror symmetric about the input coupler only when the output coupler
    // is nearly a perfect reflector.
    // Sites sit at pi/2 + j pi + z0 from the input coupler, so z0 = pi/2
    // makes the stack symmetric under z -> -z.
    Setup s = setup(0.95, 5e5, 301);
    s.layout.r_hr = 1.0 - 1e-12;
    s.layout.lattice.z0_phase = 0.5 * kPi;
    for (double x : {-20.0, 0.5, 5.0}) {
      const RingOutputs o = ring_outputs(s.layout, s.d, drive_at(x * s.p.gamma, x * s.p.gamma, 1.0, 1.0));
      CHECK(std::abs(o.transmitted.plus) == doctest::Approx(std::abs(o.transmitted.minus)).epsilon(1e-9));
    }
  }
  SUBCASE("linearity") {
    Setup s = setup(0.95, 5e5, 300);
    const DriveConfig a = drive_at(2 * s.p.gamma, 2 * s.p.gamma, cplx(1.0, 0.5), cplx(0.2, -0.1));
    const DriveConfig b = drive_at(2 * s.p.gamma, 2 * s.p.gamma, cplx(-0.3, 0.0), cplx(0.0, 0.7));
    const DriveConfig ab = drive_at(2 * s.p.gamma, 2 * s.p.gamma, a.eta_plus + b.eta_plus, a.eta_minus + b.eta_minus);
    const RingOutputs oa = ring_outputs(s.layout, s.d, a), ob = ring_outputs(s.layout, s.d, b),
                      oab = ring_outputs(s.layout, s.d, ab);
    const double scale = std::abs(oab.transmitted.plus) + std::abs(oab.reflected.plus);
    CHECK(std::abs(oa.transmitted.plus + ob.transmitted.plus - oab.transmitted.plus) < 1e-12 * scale);
    CHECK(std::abs(oa.transmitted.minus + ob.transmitted.minus - oab.transmitted.minus) < 1e-12 * scale);
    CHECK(std::abs(oa.reflected.plus + ob.reflected.plus - oab.reflected.plus) < 1e-12 * scale);
    CHECK(std::abs(oa.reflected.minus + ob.reflected.minus - oab.reflected.minus) < 1e-12 * scale);
  }
  SUBCASE("energy balance") {
    Setup s = setup(0.95, 5e5, 300);
    for (double x : {-10.0, 0.0, 3.0}) {
      const SpectrumPoint sp = spectrum_point_ring(s.layout, s.d, drive_at(x * s.p.gamma, x * s.p.gamma, 1.0, 0.5));
      CHECK(sp.absorption > 0.0);
      CHECK(sp.absorption < 1.25);
    }
    CHECK_THROWS_AS(spectrum_point_ring(s.layout, s.d, drive_at(0, 0, 0.0, 1.0)), ConfigError);
  }
}

TEST_CASE("ring fields") {
  Setup s = setup(0.95, 5e5, 300);
  const DriveConfig dr = drive_at(5 * s.p.gamma, 5 * s.p.gamma);
  const RingOutputs o = ring_outputs(s.layout, s.d, dr);
  const AmpPair at0 = ring_field_at(s.layout, s.d, dr, 0.0);
  CHECK(at0.plus == o.at_point1.plus);
  CHECK(at0.minus == o.at_point1.minus);
  CHECK_THROWS_AS(ring_field_at(s.layout, s.d, dr, -1e-9), ConfigError);

  Setup e = setup(0.95, 0.0, 300);
  const double a0 = std::abs(ring_field_at(e.layout, e.d, dr, 0.0).plus);
  const double coupler = e.layout.length - e.layout.d;
  for (double f : {0.1, 0.3, 0.5, 0.7})
    CHECK(std::abs(ring_field_at(e.layout, e.d, dr, f * coupler).plus) == doctest::Approx(a0).epsilon(1e-12));
  CHECK(std::abs(ring_field_at(e.layout, e.d, dr, 0.5 * (coupler + e.layout.length)).plus) ==
        doctest::Approx(a0 * e.layout.r_hr).epsilon(1e-12));

  Setup t = setup(0.95, 5e5, 200);
  t.layout.lattice.kzbar = 0.5;
  t.layout.lattice.site_phase = kPi * (1 + 2e-3);
  const auto sheets = ring_sheet_samples(t.layout, t.d, dr);
  CHECK(sheets.size() == 200 * 30);
  CHECK(spont_check(sheets) >= 0.99);
}

TEST_CASE("optically thick ring stays passive and locally consistent") {
  Setup s = setup(0.9, 5e5, 300);
  s.p.g_override = 10.0 * s.p.gamma;
  s.d = derive(s.p);
  s.layout = make_ring_layout(s.p, s.d, kPi);
  for (double dc : {0.0, 5.0, -25.0}) {
    const DriveConfig dr = drive_at(dc * s.p.gamma, 0.0);
    const SpectrumPoint sp = spectrum_point_ring(s.layout, s.d, dr);
    CHECK(std::isfinite(sp.t_plus));
    CHECK(sp.t_plus >= 0.0);
    CHECK(sp.absorption > -1e-12);
    CHECK(sp.absorption <= 1.0 + 1e-12);
    // Each element maps its left boundary amplitudes onto the right ones.
    const auto chain = ring_chain(s.layout, s.d.beta(0.0), dr.delta_c);
    const auto sheets = ring_sheet_samples(s.layout, s.d, dr);
    double drops = 0.0, worst = 0.0;
    for (const auto& sh : sheets) {
      drops += sh.flux_drop();
      const AmpPair mapped = atomic_layer(sh.atoms * s.d.beta(0.0)) * sh.before;
      worst = std::max(worst, std::abs(mapped.plus - sh.after.plus) + std::abs(mapped.minus - sh.after.minus));
    }
    CHECK(worst < 1e-9);
    CHECK(chain.size() > sheets.size());
    // Lossless couplers: everything not transmitted or reflected is absorbed by the sheets.
    CHECK(std::abs(drops - sp.absorption) < 1e-9);
  }
}

TEST_CASE("ring profile matches pointwise fields") {
  Setup s = setup(0.9, 2e5, 50, kPi * (1 + 1e-3));
  const DriveConfig dr = drive_at(3 * s.p.gamma, 3 * s.p.gamma, 1.0, 0.4);
  const auto prof = ring_intensity_profile(s.layout, s.d, dr);
  const auto chain = ring_chain(s.layout, s.d.beta(dr.delta_a), dr.delta_c);
  REQUIRE(prof.size() == chain.size() + 1);
  int checked = 0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& e = chain[i];
    if (e.kind != ChainElement::Kind::Free || e.z_end <= e.z_begin) continue;
    // Midway along a free path the field is the end value propagated back.
    const AmpPair f = ring_field_at(s.layout, s.d, dr, 0.5 * (e.z_begin + e.z_end));
    const AmpPair g = propagation(-0.5 * e.phase) * prof[i + 1].field;
    CHECK(std::abs(f.plus - g.plus) < 1e-10 * (1 + std::abs(f.plus)));
    CHECK(std::abs(f.minus - g.minus) < 1e-10 * (1 + std::abs(f.minus)));
    ++checked;
  }
  CHECK(checked > 50);
}
