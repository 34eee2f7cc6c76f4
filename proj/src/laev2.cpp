// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#include "acrot/laev2.hpp"

#include <cmath>

namespace acrot {

// The statements follow the Fortran reference line by line so the results
// match a reference LAPACK build bit for bit (round to nearest, no
// contraction). The complex modulus goes through the C library hypot,
// which is what gfortran emits for ABS of a complex argument.

template <Binary F>
Laev2Out<F> laev2(F a, F b, F c) noexcept {
  constexpr F one = 1;
  constexpr F two = 2;
  constexpr F zero = 0;
  constexpr F half = 0.5;

  Laev2Out<F> out;
  F acmn, acmx, rt;
  int sgn1, sgn2;

  const F sm = a + c;
  const F df = a - c;
  const F adf = std::fabs(df);
  const F tb = b + b;
  const F ab = std::fabs(tb);
  if (std::fabs(a) > std::fabs(c)) {
    acmx = a;
    acmn = c;
  } else {
    acmx = c;
    acmn = a;
  }
  if (adf > ab) {
    const F ratio = ab / adf;
    rt = adf * std::sqrt(one + ratio * ratio);
  } else if (adf < ab) {
    const F ratio = adf / ab;
    rt = ab * std::sqrt(one + ratio * ratio);
  } else {
    rt = ab * std::sqrt(two);
  }
  if (sm < zero) {
    out.rt1 = half * (sm - rt);
    // Order of execution matters here.
    out.rt2 = (acmx / out.rt1) * acmn - (b / out.rt1) * b;
    sgn1 = -1;
  } else if (sm > zero) {
    out.rt1 = half * (sm + rt);
    out.rt2 = (acmx / out.rt1) * acmn - (b / out.rt1) * b;
    sgn1 = 1;
  } else {
    out.rt1 = half * rt;
    out.rt2 = -half * rt;
    sgn1 = 1;
  }

  F cs;
  if (df >= zero) {
    cs = df + rt;
    sgn2 = 1;
  } else {
    cs = df - rt;
    sgn2 = -1;
  }
  const F acs = std::fabs(cs);
  F cs1, sn1;
  if (acs > ab) {
    const F ct = -tb / cs;
    sn1 = one / std::sqrt(one + ct * ct);
    cs1 = ct * sn1;
  } else {
    if (ab == zero) {
      cs1 = one;
      sn1 = zero;
    } else {
      const F tn = -cs / tb;
      cs1 = one / std::sqrt(one + tn * tn);
      sn1 = tn * cs1;
    }
  }
  if (sgn1 == sgn2) {
    const F tn = cs1;
    cs1 = -sn1;
    sn1 = tn;
  }
  out.cs1 = cs1;
  out.sn1 = {sn1, zero};
  return out;
}

template <Binary F>
Laev2Out<F> laev2(const Herm2<F>& a) noexcept {
  // B = a12 = conj(a21); W = conj(B) / |B| = a21 / |a21|.
  const F abs_b = std::hypot(a.re_a21, a.im_a21);
  F wr = 1;
  F wi = 0;
  if (abs_b != F(0)) {
    wr = a.re_a21 / abs_b;
    wi = a.im_a21 / abs_b;
  }
  Laev2Out<F> out = laev2(a.a11, abs_b, a.a22);
  // SN1 = W*T with T promoted to (T, 0); the zero terms fix signed zeros.
  const F t = out.sn1.real();
  out.sn1 = {wr * t - wi * F(0), wr * F(0) + wi * t};
  return out;
}

template Laev2Out<float> laev2<float>(float, float, float) noexcept;
template Laev2Out<double> laev2<double>(double, double, double) noexcept;
template Laev2Out<float> laev2<float>(const Herm2<float>&) noexcept;
template Laev2Out<double> laev2<double>(const Herm2<double>&) noexcept;

}  // namespace acrot
