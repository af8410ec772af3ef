#include "cavlat/mat2.hpp"

#include <algorithm>
#include <cmath>

namespace cavlat {

const char* to_string(Geometry g) { return g == Geometry::Linear ? "linear" : "ring"; }
const char* to_string(Model m) { return m == Model::ODM ? "odm" : "tmm"; }

Geometry parse_geometry(const std::string& s) {
  if (s == "linear") return Geometry::Linear;
  if (s == "ring") return Geometry::Ring;
  throw ConfigError("unknown geometry '" + s + "' (expected linear|ring)");
}

Model parse_model(const std::string& s) {
  if (s == "odm") return Model::ODM;
  if (s == "tmm") return Model::TMM;
  throw ConfigError("unknown model '" + s + "' (expected odm|tmm)");
}

Mat2 Mat2::inverse() const {
  const cplx d = det();
  if (d == 0.0) throw NumericalError("Mat2::inverse: singular matrix");
  return {m22 / d, -m12 / d, -m21 / d, m11 / d, role};
}

double Mat2::max_abs_diff(const Mat2& o) const {
  return std::max({std::abs(m11 - o.m11), std::abs(m12 - o.m12), std::abs(m21 - o.m21),
                   std::abs(m22 - o.m22)});
}

SBlock SBlock::from_transfer(const Mat2& m) {
  if (m.m22 == 0.0) throw NumericalError("SBlock: zero (2,2) pivot");
  if (m.m12 == 0.0 && m.m21 == 0.0) return {m.m11, 1.0 / m.m22, 0.0, 0.0};
  const cplx inv = 1.0 / m.m22;
  return {m.det() * inv, inv, -m.m21 * inv, m.m12 * inv};
}

namespace {

cplx star_denominator(const SBlock& a, const SBlock& b) {
  const cplx den = 1.0 - a.rr * b.rl;
  if (den == 0.0) throw NumericalError("star product: resonant junction is singular");
  return den;
}

}  // namespace

SBlock star(const SBlock& a, const SBlock& b) {
  if (a.rr == 0.0 || b.rl == 0.0) return {a.t * b.t, a.tp * b.tp, a.rl + a.tp * b.rl * a.t, b.rr + b.t * a.rr * b.tp};
  const cplx inv = 1.0 / star_denominator(a, b);
  return {a.t * b.t * inv, a.tp * b.tp * inv, a.rl + a.tp * b.rl * a.t * inv, b.rr + b.t * a.rr * b.tp * inv};
}

AmpPair junction(const SBlock& a, const SBlock& b, cplx a_plus, cplx b_minus) {
  const cplx plus = (a.t * a_plus + a.rr * b.tp * b_minus) / star_denominator(a, b);
  return {plus, b.rl * plus + b.tp * b_minus};
}

namespace {

Mat2 partial_inversion(const Mat2& m, MatRole out_role) {
  if (m.m22 == 0.0) throw NumericalError("partial inversion: zero (2,2) pivot");
  const cplx inv = 1.0 / m.m22;
  return {m.det() * inv, m.m12 * inv, -m.m21 * inv, inv, out_role};
}

}  // namespace

Mat2 s_from_t(const Mat2& t) {
  if (t.role != MatRole::Transfer) throw ConfigError("s_from_t: argument is not a transfer matrix");
  return partial_inversion(t, MatRole::Scattering);
}

Mat2 t_from_s(const Mat2& s) {
  if (s.role != MatRole::Scattering) throw ConfigError("t_from_s: argument is not a scattering matrix");
  return partial_inversion(s, MatRole::Transfer);
}

cplx unit_phase(double phase) {
  // Multiples of pi/2 are returned exactly so commensurate stacks stay exact.
  const double q = 2.0 * phase / kPi;
  if (q == std::nearbyint(q) && std::abs(q) < 1e15) {
    switch (static_cast<int>(std::fmod(q, 4.0) + 4.0) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, phase);
}

double multiple_phase(long long n, double phi) {
  return std::fmod(static_cast<double>(n) * (phi / kPi), 2.0) * kPi;
}

Mat2 propagation(double phase) {
  const cplx e = unit_phase(phase);
  return Mat2::diag(e, std::conj(e));
}

namespace {

double transmission_amp(double r_amp) {
  if (!(r_amp >= 0.0 && r_amp <= 1.0)) throw ConfigError("mirror amplitude reflectivity outside [0,1]");
  return std::sqrt(1.0 - r_amp * r_amp);
}

}  // namespace

Mat2 beamsplitter_s(double r_amp) {
  const double t = transmission_amp(r_amp);
  return {t, -r_amp, r_amp, t, MatRole::Scattering};
}

Mat2 beamsplitter_t(double r_amp) {
  const double t = transmission_amp(r_amp);
  if (t == 0.0) throw NumericalError("beamsplitter_t: perfect reflector has no transfer matrix");
  return {1.0 / t, -r_amp / t, -r_amp / t, 1.0 / t, MatRole::Transfer};
}

Mat2 loss(double r_ls, int sign) {
  if (!(r_ls > 0.0 && r_ls <= 1.0)) throw ConfigError("loss factor r_ls outside (0,1]");
  const double s = sign >= 0 ? 1.0 : -1.0;
  return Mat2::diag(s * r_ls, s / r_ls);
}

Mat2 atomic_layer(cplx beta1) {
  const cplx ib = kI * beta1;
  return {1.0 + ib, ib, -ib, 1.0 - ib, MatRole::Transfer};
}

}  // namespace cavlat
