// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#include "acrot/oracle.hpp"

#include <limits>

namespace acrot {

namespace {

XD xd_copy_sign(const XD& x, double sign_of) { return sign_bit(x) == sign_bit(sign_of) ? x : xd_neg(x); }

/// min/max with the NaN suppression of min_num/max_num.
XD xd_min_num(const XD& x, const XD& y) {
  if (xd_is_nan(x)) return y;
  if (xd_is_nan(y)) return x;
  return xd_compare(x, y) == std::partial_ordering::greater ? y : x;
}

XD xd_max_num(const XD& x, const XD& y) {
  if (xd_is_nan(x)) return y;
  if (xd_is_nan(y)) return x;
  return xd_compare(x, y) == std::partial_ordering::less ? y : x;
}

/// Division with the IEEE conventions for a zero divisor.
XD ieee_div(const XD& num, const XD& den) {
  if (xd_is_zero(den)) {
    if (xd_is_zero(num) || xd_is_nan(num)) return XD{dd_nan};
    const double inf = std::numeric_limits<double>::infinity();
    return XD{sign_bit(num) != sign_bit(den) ? -inf : inf};
  }
  return xd_div(num, den);
}

}  // namespace

OracleEvd oracle_evd2(const Herm2<double>& a) noexcept {
  OracleEvd o;
  o.zeta = compute_zeta(a);
  const Scaled<double> sc = scale_matrix(a, o.zeta);
  const XD a11{sc.a.a11};
  const XD a22{sc.a.a22};
  const XD re{sc.a.re_a21};
  const XD im{sc.a.im_a21};

  o.abs_a21 = xd_hypot(re, im);
  o.cos_alpha = xd_copy_sign(xd_min_num(ieee_div(xd_abs(re), o.abs_a21), XD{1.0}), sc.a.re_a21);
  o.sin_alpha = ieee_div(im, xd_max_num(o.abs_a21, XD{smallest_subnormal<double>}));

  o.o_twice = xd_scale(o.abs_a21, 1);
  XD diff{two_sum(sc.a.a11, -sc.a.a22)};  // exact
  if (xd_is_zero(diff)) {
    // Keep the IEEE sign of the binary64 difference.
    diff = XD{sc.a.a11 - sc.a.a22};
  }
  o.a_diff = diff;
  const XD q = ieee_div(o.o_twice, xd_abs(o.a_diff));
  o.tan_2phi = xd_copy_sign(xd_min_num(xd_max_num(q, XD{0.0}), XD{largest<double>}), o.a_diff.m.hi);

  const XD one{1.0};
  o.tan_phi = xd_div(o.tan_2phi, xd_add(one, xd_hypot(o.tan_2phi, one)));
  o.sec2_phi = xd_add(xd_mul(o.tan_phi, o.tan_phi), one);
  o.cos_phi = xd_div(one, xd_sqrt(o.sec2_phi));
  o.sin_phi = xd_mul(o.tan_phi, o.cos_phi);
  o.cos_alpha_sin_phi = xd_mul(o.cos_alpha, o.sin_phi);
  o.sin_alpha_sin_phi = xd_mul(o.sin_alpha, o.sin_phi);

  const XD& t = o.tan_phi;
  o.lambda1_scaled = xd_div(xd_add(xd_mul(t, xd_add(xd_mul(a22, t), o.o_twice)), a11), o.sec2_phi);
  o.lambda2_scaled = xd_div(xd_add(xd_mul(t, xd_sub(xd_mul(a11, t), o.o_twice)), a22), o.sec2_phi);
  return o;
}

ClosedFormEvd closed_form_evd2(const Herm2<double>& a) noexcept {
  ClosedFormEvd c;
  c.zeta = compute_zeta(a);
  const Scaled<double> sc = scale_matrix(a, c.zeta);
  const XD a11{sc.a.a11};
  const XD a22{sc.a.a22};
  const XD re{sc.a.re_a21};
  const XD im{sc.a.im_a21};

  const XD diff{two_sum(sc.a.a11, -sc.a.a22)};
  const bool negative = diff.m.hi < 0.0 || (diff.m.hi == 0.0 && sign_bit(sc.a.a11 - sc.a.a22));
  const XD abs_a21 = xd_hypot(re, im);
  const XD off = xd_scale(abs_a21, 1);
  const XD r = xd_hypot(diff, off);
  const XD mean = xd_scale(xd_add(a11, a22), -1);
  const XD half_r = xd_scale(r, -1);

  if (xd_is_zero(r)) {
    c.lambda1_scaled = a11;
    c.lambda2_scaled = a22;
    c.cos_phi = XD{1.0};
    return c;
  }
  c.lambda1_scaled = negative ? xd_sub(mean, half_r) : xd_add(mean, half_r);
  c.lambda2_scaled = negative ? xd_add(mean, half_r) : xd_sub(mean, half_r);

  const XD cos2phi = xd_div(xd_abs(diff), r);
  c.cos_phi = xd_sqrt(xd_scale(xd_add(XD{1.0}, cos2phi), -1));
  // sin(phi) = sin(2 phi) / (2 cos(phi)), sin(2 phi) = sign * 2|a21| / r
  XD sin_phi = xd_div(off, xd_mul(xd_scale(r, 1), c.cos_phi));
  if (negative) sin_phi = xd_neg(sin_phi);
  if (!xd_is_zero(abs_a21)) {
    c.cos_alpha_sin_phi = xd_mul(xd_div(re, abs_a21), sin_phi);
    c.sin_alpha_sin_phi = xd_mul(xd_div(im, abs_a21), sin_phi);
  }
  return c;
}

}  // namespace acrot
