// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>

#include "acrot/crmath.hpp"

namespace acrot {

/// Hermitian matrix of order two,
///
///     A = [ a11        conj(a21) ]
///         [ a21        a22       ]
///
/// with real diagonal and the lower off-diagonal stored as (re, im).
/// All four fields are expected to be finite.
template <Binary F>
struct Herm2 {
  F a11{};
  F a22{};
  F re_a21{};
  F im_a21{};
};

/// Computed rotation
///
///     U = [ cos(phi)                    -exp(-i alpha) sin(phi) ]
///         [ exp(i alpha) sin(phi)        cos(phi)              ]
///
/// stored as its three independent real numbers.
template <Binary F>
struct Rot2 {
  F cos_phi{};
  F cos_alpha_sin_phi{};
  F sin_alpha_sin_phi{};
};

template <Binary F>
struct Evd2Result {
  Rot2<F> rot;
  /// Eigenvalues of A' = 2^zeta A; always finite.
  F lambda1_scaled{};
  F lambda2_scaled{};
  /// -zeta; the eigenvalues of A are lambda_scaled * 2^back_exponent.
  int back_exponent = 0;
  /// Backscaled eigenvalues, present only when requested. May overflow or
  /// round into the subnormal range.
  std::optional<F> lambda1;
  std::optional<F> lambda2;
};

/// Every intermediate value of the rotation pipeline, plus the flags used to
/// decide whether the relative error bounds apply to this input.
template <Binary F>
struct Intermediates {
  int zeta = 0;
  Herm2<F> a_scaled;
  F abs_a21{};
  F cos_alpha{};
  F sin_alpha{};
  int beta = 2;  // 1 when a21' is real or imaginary (polar form exact)
  F o_twice{};
  F a_diff{};
  F quotient{};  // o_twice / |a_diff| before filtering
  F tan_2phi{};
  F tan_phi{};
  F sec2_phi{};
  F cos_phi{};
  F sin_phi{};

  bool scale_inexact_underflow = false;
  /// Some computed value that should be nonzero and normal underflowed.
  bool trace_underflow = false;
  /// |Re a21'| = |Im a21'| = smallest subnormal.
  bool polar_danger = false;

  /// True when no inexact underflow occurred anywhere in the computation.
  [[nodiscard]] bool qualifies() const { return !scale_inexact_underflow && !trace_underflow && !polar_danger; }
};

template <Binary F>
struct Scaled {
  Herm2<F> a;
  bool inexact_underflow = false;
};

template <Binary F>
struct Polar {
  F abs_a21{};
  F cos_alpha{};
  F sin_alpha{};
  int beta = 2;
};

template <Binary F>
struct CosSin {
  F sec2_phi{};
  F cos_phi{};
  F sin_phi{};
};

/// Exponent zeta placing the largest entry's frexp exponent at max_exp - 3.
template <Binary F>
int compute_zeta(const Herm2<F>& a) noexcept;

/// A' = 2^zeta A entrywise; flags entries whose scaling was inexact.
template <Binary F>
Scaled<F> scale_matrix(const Herm2<F>& a, int zeta) noexcept;

/// Polar form |a21'| exp(i alpha) of the scaled off-diagonal element.
template <Binary F>
Polar<F> polar_a21(const Herm2<F>& a_scaled) noexcept;

/// copysign(min(max(o / |a_diff|, 0), nu), a_diff).
template <Binary F>
F tangent_double_angle(F o_twice, F a_diff) noexcept;

/// tan(2 phi) / (1 + hypot(tan(2 phi), 1)).
template <Binary F>
F tangent_half(F tan_2phi) noexcept;

/// sec^2 = fma(t, t, 1), cos = rsqrt(sec^2), sin = t * cos.
template <Binary F>
CosSin<F> cosine_sine(F tan_phi) noexcept;

/// Scaled eigenvalues (lambda1', lambda2').
template <Binary F>
std::pair<F, F> eigenvalues_scaled(const Herm2<F>& a_scaled, F tan_phi, F sec2_phi, F o_twice) noexcept;

/// Jacobi rotation and eigenvalues of a complex Hermitian 2x2 matrix.
/// When `trace` is non-null it receives every intermediate value.
template <Binary F>
Evd2Result<F> jaev2(const Herm2<F>& a, bool backscale = false, Intermediates<F>* trace = nullptr) noexcept;

/// Real symmetric variant for [[a11, a21], [a21, a22]]. Bit-identical to
/// `jaev2` on the embedding im_a21 = +0.
template <Binary F>
Evd2Result<F> jasv2(F a11, F a22, F a21, bool backscale = false, Intermediates<F>* trace = nullptr) noexcept;

inline Evd2Result<double> zjaev2(const Herm2<double>& a, bool backscale = false,
                                 Intermediates<double>* trace = nullptr) noexcept {
  return jaev2(a, backscale, trace);
}
inline Evd2Result<float> cjaev2(const Herm2<float>& a, bool backscale = false,
                                Intermediates<float>* trace = nullptr) noexcept {
  return jaev2(a, backscale, trace);
}
inline Evd2Result<double> djasv2(double a11, double a22, double a21, bool backscale = false,
                                 Intermediates<double>* trace = nullptr) noexcept {
  return jasv2(a11, a22, a21, backscale, trace);
}
inline Evd2Result<float> sjasv2(float a11, float a22, float a21, bool backscale = false,
                                Intermediates<float>* trace = nullptr) noexcept {
  return jasv2(a11, a22, a21, backscale, trace);
}

}  // namespace acrot
