// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>

#include "acrot/jaev2.hpp"

namespace acrot {

/// Output of the LAPACK xLAEV2 routines: rt1 >= rt2 in absolute value and
/// (cs1, sn1) the unit right eigenvector for rt1, so that
///
///     [ cs1        conj(sn1) ] [ a11  a12 ] [ cs1   -conj(sn1) ]   [ rt1  0   ]
///     [ -sn1       cs1       ] [ a21  a22 ] [ sn1    cs1       ] = [ 0    rt2 ]
template <Binary F>
struct Laev2Out {
  F rt1{};
  F rt2{};
  F cs1{};
  std::complex<F> sn1{};
};

/// Transcription of reference LAPACK DLAEV2/SLAEV2 for [[a, b], [b, c]].
template <Binary F>
Laev2Out<F> laev2(F a, F b, F c) noexcept;

/// Transcription of reference LAPACK ZLAEV2/CLAEV2, with B = a12 = conj(a21).
template <Binary F>
Laev2Out<F> laev2(const Herm2<F>& a) noexcept;

inline Laev2Out<double> zlaev2_ref(const Herm2<double>& a) noexcept { return laev2(a); }
inline Laev2Out<float> claev2_ref(const Herm2<float>& a) noexcept { return laev2(a); }
inline Laev2Out<double> dlaev2_ref(double a, double b, double c) noexcept { return laev2(a, b, c); }
inline Laev2Out<float> slaev2_ref(float a, float b, float c) noexcept { return laev2(a, b, c); }

/// The rotation in the (cos, Re, Im) form used by the determinant metric.
template <Binary F>
Rot2<F> laev2_to_rot(const Laev2Out<F>& out) noexcept {
  return {out.cs1, out.sn1.real(), out.sn1.imag()};
}

}  // namespace acrot
