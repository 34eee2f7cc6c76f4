// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#include "acrot/dd.hpp"

#include <array>
#include <cmath>

namespace acrot {

namespace {

bool bad(const DD& a) { return !is_finite(a.hi) || !is_finite(a.lo); }

}  // namespace

DD dd_add(const DD& a, const DD& b) noexcept {
  if (bad(a) || bad(b)) {
    const double s = a.hi + b.hi;
    return {s, is_nan(s) ? s : 0.0};
  }
  // AccurateDWPlusDW (Joldes, Muller, Popescu 2017).
  const DD s = two_sum(a.hi, b.hi);
  const DD t = two_sum(a.lo, b.lo);
  const DD v = fast_two_sum(s.hi, s.lo + t.hi);
  const DD r = fast_two_sum(v.hi, v.lo + t.lo);
  if (r.hi == 0.0) return {a.hi + b.hi == 0.0 && a.lo == 0.0 && b.lo == 0.0 ? a.hi + b.hi : 0.0, 0.0};
  return r;
}

DD dd_mul(const DD& a, const DD& b) noexcept {
  if (bad(a) || bad(b)) {
    const double p = a.hi * b.hi;
    return {p, is_nan(p) ? p : 0.0};
  }
  const DD c = two_prod(a.hi, b.hi);
  const double cross = fused_mul_add(a.lo, b.hi, a.hi * b.lo);
  return fast_two_sum(c.hi, c.lo + cross);
}

DD dd_div(const DD& a, const DD& b) noexcept {
  if (b.hi == 0.0 || dd_is_nan(a) || dd_is_nan(b)) return dd_nan;
  if (bad(a) || bad(b)) {
    const double q = a.hi / b.hi;
    return {q, 0.0};
  }
  // Long division with three partial quotients.
  const double q1 = a.hi / b.hi;
  if (!is_finite(q1) || q1 == 0.0) return {q1, 0.0};
  DD r = dd_sub(a, dd_mul(b, DD{q1}));
  const double q2 = r.hi / b.hi;
  r = dd_sub(r, dd_mul(b, DD{q2}));
  const double q3 = r.hi / b.hi;
  const DD q = fast_two_sum(q1, q2);
  return dd_add(q, DD{q3});
}

DD dd_sqrt(const DD& a) noexcept {
  if (dd_is_nan(a) || a.hi < 0.0) return dd_nan;
  if (a.hi == 0.0) return {0.0, 0.0};
  if (is_inf(a.hi)) return {a.hi, 0.0};
  const double s = std::sqrt(a.hi);
  const DD sq = two_prod(s, s);
  const double r = ((a.hi - sq.hi) - sq.lo) + a.lo;
  return fast_two_sum(s, r / (2.0 * s));
}

DD dd_hypot(const DD& a, const DD& b) noexcept {
  if (dd_is_nan(a) || dd_is_nan(b)) return dd_nan;
  const DD x = dd_abs(a);
  const DD y = dd_abs(b);
  const double big = x.hi >= y.hi ? x.hi : y.hi;
  if (big == 0.0) return {0.0, 0.0};
  if (is_inf(big)) return {big, 0.0};
  const int k = exponent_of(big);
  const DD xs = dd_scale(x, -k);
  const DD ys = dd_scale(y, -k);
  const DD r = dd_sqrt(dd_add(dd_mul(xs, xs), dd_mul(ys, ys)));
  return dd_scale(r, k);
}

std::partial_ordering dd_compare(const DD& a, const DD& b) noexcept {
  if (dd_is_nan(a) || dd_is_nan(b)) return std::partial_ordering::unordered;
  if (a.hi < b.hi) return std::partial_ordering::less;
  if (a.hi > b.hi) return std::partial_ordering::greater;
  if (a.lo < b.lo) return std::partial_ordering::less;
  if (a.lo > b.lo) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

int expansion_sign(std::span<const double> terms) noexcept {
  // Shewchuk's Grow-Expansion with zero elimination; the last component is
  // the largest in magnitude and carries the sign of the exact sum.
  std::array<double, 64> e{};
  std::size_t n = 0;
  for (double t : terms) {
    double q = t;
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const DD s = two_sum(q, e[i]);
      q = s.hi;
      if (s.lo != 0.0) e[m++] = s.lo;
    }
    if (q != 0.0) e[m++] = q;
    n = m;
  }
  if (n == 0) return 0;
  return e[n - 1] > 0.0 ? 1 : -1;
}

namespace {

bool xd_special(const XD& a) { return a.m.hi == 0.0 || !is_finite(a.m.hi); }

/// Mantissa of `a` expressed at exponent `e` (>= a.e).
DD align(const XD& a, int e) { return xd_special(a) ? a.m : dd_scale(a.m, a.e - e); }

}  // namespace

XD xd_add(const XD& a, const XD& b) noexcept {
  if (xd_special(a) || xd_special(b)) {
    if (a.m.hi == 0.0 && is_finite(b.m.hi)) return b.m.hi == 0.0 ? XD{dd_add(a.m, b.m)} : b;
    if (b.m.hi == 0.0 && is_finite(a.m.hi)) return a;
    return XD{dd_add(DD{a.m.hi}, DD{b.m.hi})};
  }
  const int e = a.e > b.e ? a.e : b.e;
  return XD::make(dd_add(align(a, e), align(b, e)), e);
}

XD xd_mul(const XD& a, const XD& b) noexcept {
  if (xd_special(a) || xd_special(b)) return XD{dd_mul(DD{a.m.hi}, DD{b.m.hi})};
  return XD::make(dd_mul(a.m, b.m), a.e + b.e);
}

XD xd_div(const XD& a, const XD& b) noexcept {
  if (xd_special(a) || xd_special(b)) {
    if (b.m.hi == 0.0 || xd_is_nan(a) || xd_is_nan(b)) return XD{dd_nan};
    return XD{DD{a.m.hi / b.m.hi}};
  }
  return XD::make(dd_div(a.m, b.m), a.e - b.e);
}

XD xd_sqrt(const XD& a) noexcept {
  if (xd_special(a) || a.m.hi < 0.0) return XD{dd_sqrt(a.m)};
  // Make the exponent even; the mantissa stays within [1, 4).
  const int odd = a.e & 1;
  return XD::make(dd_sqrt(dd_scale(a.m, odd)), (a.e - odd) / 2);
}

XD xd_hypot(const XD& a, const XD& b) noexcept {
  if (xd_special(a) || xd_special(b)) {
    if (a.m.hi == 0.0) return xd_abs(b);
    if (b.m.hi == 0.0) return xd_abs(a);
    return XD{dd_hypot(DD{a.m.hi}, DD{b.m.hi})};
  }
  const int e = a.e > b.e ? a.e : b.e;
  return XD::make(dd_hypot(align(a, e), align(b, e)), e);
}

std::partial_ordering xd_compare(const XD& a, const XD& b) noexcept {
  if (xd_is_nan(a) || xd_is_nan(b)) return std::partial_ordering::unordered;
  auto cls = [](const XD& x) { return x.m.hi > 0.0 ? 1 : x.m.hi < 0.0 ? -1 : 0; };
  const int ca = cls(a);
  const int cb = cls(b);
  if (ca != cb || ca == 0) return ca <=> cb;
  if (!is_finite(a.m.hi) || !is_finite(b.m.hi)) return dd_compare(DD{a.m.hi}, DD{b.m.hi});
  if (a.e != b.e) return ca > 0 ? a.e <=> b.e : b.e <=> a.e;
  return dd_compare(a.m, b.m);
}

}  // namespace acrot
