// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#include "acrot/crmath.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include "acrot/dd.hpp"

namespace acrot {

namespace {

using u128 = unsigned __int128;

int msb_index(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi != 0) return 127 - std::countl_zero(hi);
  return 63 - std::countl_zero(static_cast<std::uint64_t>(v));
}

/// Finite nonzero x as (integer significand, exponent): |x| = m * 2^e.
template <Binary F>
void decompose(F x, std::uint64_t& m, int& e) {
  using T = FormatTraits<F>;
  const int field = detail::exponent_field(x);
  const std::uint64_t frac = to_bits(x) & detail::frac_mask<F>;
  if (field == 0) {
    m = frac;
    e = T::min_exp - 1 - T::precision_bits;
  } else {
    m = frac | (std::uint64_t{1} << T::precision_bits);
    e = field - T::exponent_bias - T::precision_bits;
  }
}

/// Round (-1)^neg * mant * 2^exp to F, nearest-even, with gradual underflow
/// and overflow to infinity. Bit 0 of `mant` may be a jammed sticky bit as
/// long as at least two bits below the rounding position are present.
template <Binary F>
F round_pack(bool neg, u128 mant, int exp) {
  using T = FormatTraits<F>;
  using Bits = typename T::Bits;
  constexpr int p = T::precision_bits;
  constexpr int emin = T::min_exp - 1;          // exponent of smallest normal
  constexpr int quantum_min = emin - p;         // exponent of smallest subnormal
  const Bits sign = neg ? detail::sign_mask<F> : Bits{0};
  if (mant == 0) return from_bits<F>(sign);

  const int msb = msb_index(mant);
  const int top = msb + exp;  // value in [2^top, 2^(top+1))
  if (top > T::max_exp - 1) return from_bits<F>(sign | to_bits(std::numeric_limits<F>::infinity()));

  const bool normal = top >= emin;
  const int shift = normal ? msb - p : quantum_min - exp;
  u128 q;
  if (shift <= 0) {
    q = mant << (-shift);
  } else if (shift >= 128) {
    // Entirely below half the smallest subnormal unless shift == 128 exactly.
    const bool up = shift == 128 && mant > (u128{1} << 127);
    q = up ? 1 : 0;
  } else {
    q = mant >> shift;
    const u128 rem = mant & ((u128{1} << shift) - 1);
    const u128 half = u128{1} << (shift - 1);
    if (rem > half || (rem == half && (q & 1) != 0)) ++q;
  }

  if (!normal) {
    // q <= 2^p; q == 2^p encodes the smallest normal directly.
    return from_bits<F>(sign | static_cast<Bits>(q));
  }
  int biased = top + T::exponent_bias;
  if (q == (u128{1} << (p + 1))) {
    q >>= 1;
    ++biased;
  }
  if (biased >= detail::exp_field_max<F>) return from_bits<F>(sign | to_bits(std::numeric_limits<F>::infinity()));
  return from_bits<F>(sign | (static_cast<Bits>(biased) << p) | (static_cast<Bits>(q) & detail::frac_mask<F>));
}

template <Binary F>
bool mantissa_even(F x) {
  return (to_bits(x) & 1) == 0;
}

double soft_fma_binary64(double x, double y, double z) {
  if (!is_finite(x) || !is_finite(y) || !is_finite(z)) {
    if (is_finite(x) && is_finite(y)) return z;
    return x * y + z;
  }
  if (x == 0.0 || y == 0.0) return x * y + z;
  if (z == 0.0) return x * y;

  std::uint64_t mx, my, mz;
  int ex, ey, ez;
  decompose(x, mx, ex);
  decompose(y, my, ey);
  decompose(z, mz, ez);

  u128 a = static_cast<u128>(mx) * my;
  int ea = ex + ey;
  bool sa = sign_bit(x) != sign_bit(y);
  u128 b = mz;
  int eb = ez;
  bool sb = sign_bit(z);

  // Put both most significant bits at bit 125, leaving room for a carry.
  const int sha = 125 - msb_index(a);
  a <<= sha;
  ea -= sha;
  const int shb = 125 - msb_index(b);
  b <<= shb;
  eb -= shb;

  if (eb > ea || (eb == ea && b > a)) {
    std::swap(a, b);
    std::swap(ea, eb);
    std::swap(sa, sb);
  }
  const int d = ea - eb;
  if (d >= 128) {
    b = 1;  // sticky only
  } else if (d > 0) {
    const bool lost = (b & ((u128{1} << d) - 1)) != 0;
    b = (b >> d) | (lost ? 1 : 0);
  }
  u128 r;
  if (sa == sb) {
    r = a + b;
  } else {
    r = a - b;
    if (r == 0) return 0.0;  // exact cancellation rounds to +0
  }
  return round_pack<double>(sa, r, ea);
}

float soft_fma_binary32(float x, float y, float z) {
  const double p = static_cast<double>(x) * static_cast<double>(y);  // exact
  const double zd = z;
  if (!is_finite(p) || !is_finite(zd)) return static_cast<float>(p + zd);
  // Round the sum to odd in binary64, then to nearest in binary32; 53 >= 24 + 2
  // makes the double rounding innocuous.
  const DD s = two_sum(p, zd);
  double r = s.hi;
  if (s.lo != 0.0 && mantissa_even(r)) {
    r = (s.lo > 0.0) == (r > 0.0) ? from_bits<double>(to_bits(r) + 1) : from_bits<double>(to_bits(r) - 1);
  }
  return static_cast<float>(r);
}

// ---------------------------------------------------------------------------
// Correctly rounded hypot / rsqrt.
//
// binary32: the result is approximated in binary64 with relative error below
// 2^-51. Both ends of the uncertainty interval are rounded to binary32; when
// they agree the result is settled, otherwise the two candidates are
// adjacent and the exact answer is decided by comparing the input against
// the squared midpoint with an error-free expansion.
//
// binary64: the argument is scaled by a power of two, the result is
// approximated in double-double (relative error below 2^-100), and a Ziv
// rounding test accepts it unless it lies within that error of a rounding
// boundary. The fallback compares x^2 + y^2 (resp. m^2 * x against 1) with
// the candidate midpoint m exactly.
//
// hypot: exact midpoints are reachable (scaled Pythagorean triples whose
// hypotenuse has p+2 significant bits), so the fallback must resolve ties
// to even. rsqrt: 1/sqrt(x) = m with m a midpoint would need x = 1/m^2 with
// m = odd * 2^k, odd > 1, which is never a binary number; ties cannot occur
// and the tie branch is kept only for uniformity.
// ---------------------------------------------------------------------------

constexpr double kUncertainty32 = 0x1p-50;
constexpr double kZivBound64 = 0x1p-99;

/// Picks between adjacent candidates lo < hi given the sign of
/// (exact - midpoint): +1 above, -1 below, 0 tie.
template <Binary F>
F pick(F lo, F hi, int side) {
  if (side > 0) return hi;
  if (side < 0) return lo;
  return mantissa_even(lo) ? lo : hi;
}

double upper_or_overflow_bound(float hi) {
  // The would-be neighbour above FLT_MAX is 2^128.
  return is_inf(hi) ? 0x1p128 : static_cast<double>(hi);
}

float hypot_binary32(float x, float y) {
  const double a = std::fabs(static_cast<double>(x));
  const double b = std::fabs(static_cast<double>(y));
  const double a2 = a * a;  // exact
  const double b2 = b * b;  // exact
  const double r = std::sqrt(a2 + b2);
  const float lo = static_cast<float>(r * (1.0 - kUncertainty32));
  const float hi = static_cast<float>(r * (1.0 + kUncertainty32));
  if (lo == hi) return lo;
  const double mid = (static_cast<double>(lo) + upper_or_overflow_bound(hi)) * 0.5;  // exact, 25 bits
  const double m2 = mid * mid;                                                        // exact, 50 bits
  const std::array<double, 3> terms{a2, b2, -m2};
  return pick(lo, hi, expansion_sign(terms));
}

float rsqrt_binary32(float x) {
  const double xd = x;
  const double r = 1.0 / std::sqrt(xd);
  const float lo = static_cast<float>(r * (1.0 - kUncertainty32));
  const float hi = static_cast<float>(r * (1.0 + kUncertainty32));
  if (lo == hi) return lo;
  const double mid = (static_cast<double>(lo) + static_cast<double>(hi)) * 0.5;
  const DD m2x = two_prod(mid * mid, xd);
  // 1/sqrt(x) > mid  <=>  mid^2 * x < 1
  const std::array<double, 3> terms{1.0, -m2x.hi, -m2x.lo};
  return pick(lo, hi, expansion_sign(terms));
}

/// Rounding gap of `c` on the side of `dir` (gap to the next representable
/// value away from c in that direction).
double gap_toward(double c, double dir) {
  return dir >= 0.0 ? next_up(c) - c : c - next_down(c);
}

/// Ziv test for a positive double-double approximation r with relative
/// error below 2^-99. Returns true and sets `out` if the rounding is safe.
bool ziv_accept(const DD& r, double& out) {
  const double c = r.hi;
  const double half = 0.5 * gap_toward(c, r.lo);
  const double dist = std::fabs(std::fabs(r.lo) - half);
  if (dist > c * kZivBound64) {
    out = c;
    return true;
  }
  return false;
}

/// Returns the integer floor(sqrt(n)).
std::uint64_t isqrt128(u128 n) {
  auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (static_cast<u128>(s) * s > n) --s;
  while (static_cast<u128>(s + 1) * (s + 1) <= n) ++s;
  return s;
}

double hypot_binary64(double x, double y) {
  double a = std::fabs(x);
  double b = std::fabs(y);
  if (b > a) std::swap(a, b);
  if (b == 0.0) return a;

  if (a < smallest_normal<double>) {
    // Both subnormal: integers on the 2^-1074 grid; the result stays in
    // [2^-1074, 2^-1021) where the grid spacing is still 2^-1074.
    std::uint64_t ma, mb;
    int ea, eb;
    decompose(a, ma, ea);
    decompose(b, mb, eb);
    const u128 n = static_cast<u128>(ma) * ma + static_cast<u128>(mb) * mb;
    std::uint64_t q = isqrt128(n);
    // Round to nearest: (q + 1/2)^2 = q^2 + q + 1/4 is never an integer.
    if (n - static_cast<u128>(q) * q > q) ++q;
    return round_pack<double>(false, q, ea);
  }

  const int ea = exponent_of(a);
  const int eb = exponent_of(b);
  // b/a < 2^-27 puts the exact value strictly inside (a, a + ulp(a)/2).
  if (ea - eb >= 28) return a;

  const double as = exact_scale(a, -ea);  // [0.5, 1)
  const double bs = exact_scale(b, -ea);  // >= 2^-29, exact
  const DD a2 = two_prod(as, as);
  const DD b2 = two_prod(bs, bs);
  const DD r = dd_sqrt(dd_add(a2, b2));

  double c;
  if (!ziv_accept(r, c)) {
    c = r.hi;
    const double dir = r.lo >= 0.0 ? 1.0 : -1.0;
    const double h = 0.5 * gap_toward(c, dir) * dir;  // midpoint = c + h
    const DD c2 = two_prod(c, c);
    // (c + h)^2 = c^2 + 2ch + h^2, each term exact.
    const std::array<double, 8> terms{a2.hi, a2.lo, b2.hi, b2.lo, -c2.hi, -c2.lo, -(2.0 * c * h), -(h * h)};
    const int side = expansion_sign(terms);  // sign of exact^2 - mid^2
    if (dir > 0) {
      c = pick(c, next_up(c), side);
    } else {
      c = pick(next_down(c), c, side);
    }
  }
  // The scaled result lies in [0.5, 2); scaling back is exact or overflows,
  // which is the correctly rounded outcome as well.
  return exact_scale(c, ea);
}

double rsqrt_binary64(double x) {
  // x = f * 2^e, f in [0.5, 1); scale by an even power so xs lies in [0.5, 2).
  const int e = exponent_of(x);
  const int j = e >= 0 ? e / 2 : -((1 - e) / 2);  // floor(e / 2)
  const double xs = exact_scale(x, -2 * j);
  const DD r = dd_div(DD{1.0}, dd_sqrt(DD{xs}));

  double c;
  if (!ziv_accept(r, c)) {
    c = r.hi;
    const double dir = r.lo >= 0.0 ? 1.0 : -1.0;
    const double h = 0.5 * gap_toward(c, dir) * dir;
    const DD c2 = two_prod(c, c);
    const double ch2 = 2.0 * c * h;
    const double hh = h * h;
    // mid^2 * xs as an expansion: each of c^2 (two terms), 2ch and h^2 times xs.
    const DD t0 = two_prod(c2.hi, xs);
    const DD t1 = two_prod(c2.lo, xs);
    const DD t2 = two_prod(ch2, xs);
    const DD t3 = two_prod(hh, xs);
    const std::array<double, 9> terms{1.0, -t0.hi, -t0.lo, -t1.hi, -t1.lo, -t2.hi, -t2.lo, -t3.hi, -t3.lo};
    const int side = expansion_sign(terms);  // sign of 1 - mid^2 * xs = sign of (exact - mid)
    if (dir > 0) {
      c = pick(c, next_up(c), side);
    } else {
      c = pick(next_down(c), c, side);
    }
  }
  // Result in (0.7, 1.42]; 2^-j stays well inside the normal range.
  return exact_scale(c, -j);
}

}  // namespace

namespace detail {

template <Binary F>
F scale_slow(F x, int k) noexcept {
  if (x == F(0) || !is_finite(x)) return x;
  std::uint64_t m;
  int e;
  decompose(x, m, e);
  constexpr int clamp = 4 * FormatTraits<F>::max_exp;
  if (k > clamp) k = clamp;
  if (k < -clamp) k = -clamp;
  return round_pack<F>(sign_bit(x), m, e + k);
}

template float scale_slow<float>(float, int) noexcept;
template double scale_slow<double>(double, int) noexcept;

}  // namespace detail

template <Binary F>
F next_up(F x) noexcept {
  if (is_nan(x) || x == std::numeric_limits<F>::infinity()) return x;
  if (x == F(0)) return smallest_subnormal<F>;
  const auto b = to_bits(x);
  return sign_bit(x) ? from_bits<F>(b - 1) : from_bits<F>(b + 1);
}

template <Binary F>
F next_down(F x) noexcept {
  return -next_up(-x);
}

template float next_up<float>(float) noexcept;
template double next_up<double>(double) noexcept;
template float next_down<float>(float) noexcept;
template double next_down<double>(double) noexcept;

template <>
float soft_fma<float>(float x, float y, float z) noexcept {
  return soft_fma_binary32(x, y, z);
}

template <>
double soft_fma<double>(double x, double y, double z) noexcept {
  return soft_fma_binary64(x, y, z);
}

template <Binary F>
F cr_hypot(F x, F y) noexcept {
  if (is_inf(x) || is_inf(y)) return std::numeric_limits<F>::infinity();
  if (is_nan(x) || is_nan(y)) return x + y;
  if (x == F(0)) return abs_value(y);
  if (y == F(0)) return abs_value(x);
  if constexpr (std::same_as<F, float>) {
    return hypot_binary32(x, y);
  } else {
    return hypot_binary64(x, y);
  }
}

template <Binary F>
F cr_rsqrt(F x) noexcept {
  if (is_nan(x)) return x;
  if (x == F(0)) return copy_sign(std::numeric_limits<F>::infinity(), x);
  if (x < F(0)) return std::numeric_limits<F>::quiet_NaN();
  if (is_inf(x)) return F(0);
  if constexpr (std::same_as<F, float>) {
    return rsqrt_binary32(x);
  } else {
    return rsqrt_binary64(x);
  }
}

template float cr_hypot<float>(float, float) noexcept;
template double cr_hypot<double>(double, double) noexcept;
template float cr_rsqrt<float>(float) noexcept;
template double cr_rsqrt<double>(double) noexcept;

}  // namespace acrot
