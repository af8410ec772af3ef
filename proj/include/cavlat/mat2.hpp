#pragma once

#include "cavlat/common.hpp"

#include <array>

namespace cavlat {

// Ordered pair of counter-propagating amplitudes at one axial point.
struct AmpPair {
  cplx plus{};
  cplx minus{};

  cplx sum() const { return plus + minus; }
  double flux() const { return std::norm(plus) - std::norm(minus); }
};

enum class MatRole { Transfer, Scattering };

// 2x2 complex matrix. The role tag records whether the entries map
// left-side amplitudes to right-side amplitudes (Transfer) or incoming
// to outgoing amplitudes (Scattering).
struct Mat2 {
  cplx m11{1.0}, m12{}, m21{}, m22{1.0};
  MatRole role = MatRole::Transfer;

  static Mat2 identity(MatRole r = MatRole::Transfer) { return {1.0, 0.0, 0.0, 1.0, r}; }
  static Mat2 diag(cplx a, cplx d, MatRole r = MatRole::Transfer) { return {a, 0.0, 0.0, d, r}; }

  cplx det() const { return m11 * m22 - m12 * m21; }
  Mat2 inverse() const;
  double max_abs_diff(const Mat2& o) const;

  AmpPair operator*(const AmpPair& v) const {
    return {m11 * v.plus + m12 * v.minus, m21 * v.plus + m22 * v.minus};
  }
  Mat2& operator*=(cplx s) {
    m11 *= s; m12 *= s; m21 *= s; m22 *= s;
    return *this;
  }
};

// Matrix product; the role of the left operand is kept.
inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
          a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22, a.role};
}

// Partial inversion between transfer and scattering representations.
// Both throw NumericalError on a zero (2,2) pivot and ConfigError on a
// role mismatch.
Mat2 s_from_t(const Mat2& t);
Mat2 t_from_s(const Mat2& s);

// Two-port in scattering form for left and right incident amplitudes a+
// and b-: b+ = t a+ + rr b-, a- = rl a+ + tp b-. Composing these stays
// bounded for passive structures where transfer products grow without limit.
struct SBlock {
  cplx t{1.0}, tp{1.0}, rl{}, rr{};

  static SBlock from_transfer(const Mat2& m);
  Mat2 scattering() const { return {t, rr, rl, tp, MatRole::Scattering}; }
};

// Block a followed on its right by block b.
SBlock star(const SBlock& a, const SBlock& b);

// Amplitudes at the junction between a and b for incident a+ and b-.
AmpPair junction(const SBlock& a, const SBlock& b, cplx a_plus, cplx b_minus);

// exp(i phase), exact for multiples of pi / 2.
cplx unit_phase(double phase);
// n * phi reduced modulo 2 pi, exact when phi is a small rational multiple of pi.
double multiple_phase(long long n, double phi);
// Free propagation accumulating the given phase k*z.
Mat2 propagation(double phase);

// Lossless mirror (r, t = sqrt(1 - r^2)) expressed as a transfer matrix.
Mat2 beamsplitter_t(double r_amp);
Mat2 beamsplitter_s(double r_amp);

// Extra loss diag(sign*r, sign/r); sign is +1 or -1.
Mat2 loss(double r_ls, int sign = 1);

// Thin atomic sheet with single-layer reflection coefficient beta1.
Mat2 atomic_layer(cplx beta1);

}  // namespace cavlat
