// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <span>

#include "acrot/crmath.hpp"

namespace acrot {

/// Unevaluated sum hi + lo of two binary64 values with hi = fl(hi + lo).
/// Relative accuracy of the arithmetic below is about 2^-104.
struct DD {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DD() = default;
  constexpr DD(double h) : hi(h) {}  // NOLINT(google-explicit-constructor)
  constexpr DD(double h, double l) : hi(h), lo(l) {}

  constexpr explicit operator double() const { return hi + lo; }
};

inline constexpr DD dd_nan{std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::quiet_NaN()};

// Error-free transforms.

/// s + e = a + b exactly, s = fl(a + b).
inline DD two_sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

/// Requires |a| >= |b| (or a == 0).
inline DD fast_two_sum(double a, double b) noexcept {
  const double s = a + b;
  return {s, b - (s - a)};
}

/// p + e = a * b exactly unless the product underflows.
inline DD two_prod(double a, double b) noexcept {
  const double p = a * b;
  return {p, fused_mul_add(a, b, -p)};
}

inline DD dd_from(double x) noexcept { return {x, 0.0}; }

DD dd_add(const DD& a, const DD& b) noexcept;
DD dd_mul(const DD& a, const DD& b) noexcept;
DD dd_div(const DD& a, const DD& b) noexcept;
DD dd_sqrt(const DD& a) noexcept;
/// sqrt(a^2 + b^2) with power-of-two prescaling so squares cannot overflow.
DD dd_hypot(const DD& a, const DD& b) noexcept;

inline DD dd_neg(const DD& a) noexcept { return {-a.hi, -a.lo}; }
inline DD dd_sub(const DD& a, const DD& b) noexcept { return dd_add(a, dd_neg(b)); }
inline DD dd_abs(const DD& a) noexcept { return sign_bit(a.hi) ? dd_neg(a) : a; }
inline DD dd_scale(const DD& a, int k) noexcept { return {exact_scale(a.hi, k), exact_scale(a.lo, k)}; }
inline bool dd_is_nan(const DD& a) noexcept { return is_nan(a.hi) || is_nan(a.lo); }

/// Ordering by value; unordered if either side is NaN.
std::partial_ordering dd_compare(const DD& a, const DD& b) noexcept;

inline DD operator+(const DD& a, const DD& b) noexcept { return dd_add(a, b); }
inline DD operator-(const DD& a, const DD& b) noexcept { return dd_sub(a, b); }
inline DD operator-(const DD& a) noexcept { return dd_neg(a); }
inline DD operator*(const DD& a, const DD& b) noexcept { return dd_mul(a, b); }
inline DD operator/(const DD& a, const DD& b) noexcept { return dd_div(a, b); }
inline std::partial_ordering operator<=>(const DD& a, const DD& b) noexcept { return dd_compare(a, b); }
inline bool operator==(const DD& a, const DD& b) noexcept { return dd_compare(a, b) == 0; }

/// Sign (-1, 0, +1) of the exact sum of `terms`, computed with an
/// error-free expansion. Terms must be finite and their partial sums must
/// not overflow.
int expansion_sign(std::span<const double> terms) noexcept;

/// Double-double with a separate binary exponent: the value is m * 2^e with
/// |m.hi| in [1, 2) for finite nonzero values (e = 0 otherwise). Keeps the
/// double-double relative accuracy far below the binary64 normal range,
/// where the low word of a plain DD would be subnormal.
struct XD {
  DD m;
  int e = 0;

  constexpr XD() = default;
  XD(const DD& x) : XD(make(x, 0)) {}  // NOLINT(google-explicit-constructor)
  XD(double x) : XD(DD{x}) {}          // NOLINT(google-explicit-constructor)

  static XD make(const DD& mant, int exp) noexcept {
    XD r;
    r.m = mant;
    if (mant.hi == 0.0 || !is_finite(mant.hi)) return r;
    const int k = exponent_of(mant.hi) - 1;
    r.m = dd_scale(mant, -k);
    r.e = exp + k;
    return r;
  }

  /// Nearest DD; loses accuracy once the value leaves the normal range.
  [[nodiscard]] DD to_dd() const noexcept { return dd_scale(m, e); }
  [[nodiscard]] double approx() const noexcept { return exact_scale(m.hi + m.lo, e); }
};

XD xd_add(const XD& a, const XD& b) noexcept;
XD xd_mul(const XD& a, const XD& b) noexcept;
XD xd_div(const XD& a, const XD& b) noexcept;
XD xd_sqrt(const XD& a) noexcept;
XD xd_hypot(const XD& a, const XD& b) noexcept;
std::partial_ordering xd_compare(const XD& a, const XD& b) noexcept;

inline XD xd_neg(const XD& a) noexcept { return {XD::make(dd_neg(a.m), a.e)}; }
inline XD xd_sub(const XD& a, const XD& b) noexcept { return xd_add(a, xd_neg(b)); }
inline XD xd_abs(const XD& a) noexcept { return sign_bit(a.m.hi) ? xd_neg(a) : a; }
inline XD xd_scale(const XD& a, int k) noexcept { return XD::make(a.m, a.e + k); }
inline bool xd_is_nan(const XD& a) noexcept { return dd_is_nan(a.m); }
inline bool xd_is_zero(const XD& a) noexcept { return a.m.hi == 0.0; }
inline bool sign_bit(const XD& a) noexcept { return sign_bit(a.m.hi); }

inline XD operator+(const XD& a, const XD& b) noexcept { return xd_add(a, b); }
inline XD operator-(const XD& a, const XD& b) noexcept { return xd_sub(a, b); }
inline XD operator-(const XD& a) noexcept { return xd_neg(a); }
inline XD operator*(const XD& a, const XD& b) noexcept { return xd_mul(a, b); }
inline XD operator/(const XD& a, const XD& b) noexcept { return xd_div(a, b); }
inline std::partial_ordering operator<=>(const XD& a, const XD& b) noexcept { return xd_compare(a, b); }
inline bool operator==(const XD& a, const XD& b) noexcept { return xd_compare(a, b) == 0; }

}  // namespace acrot
