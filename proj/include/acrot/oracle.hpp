// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "acrot/dd.hpp"
#include "acrot/jaev2.hpp"

namespace acrot {

/// The rotation pipeline replayed in double-double arithmetic, with the
/// same scaling, branches and clamps as `zjaev2`. Used as exact reference.
/// Values carry their own exponent so that tiny rotation elements keep
/// full relative accuracy.
struct OracleEvd {
  int zeta = 0;
  XD abs_a21;
  XD cos_alpha;
  XD sin_alpha;
  XD o_twice;
  XD a_diff;
  XD tan_2phi;
  XD tan_phi;
  XD sec2_phi;
  XD cos_phi;
  XD sin_phi;
  XD cos_alpha_sin_phi;
  XD sin_alpha_sin_phi;
  XD lambda1_scaled;
  XD lambda2_scaled;
};

/// Requires finite input; NaN entries propagate as NaN pairs.
OracleEvd oracle_evd2(const Herm2<double>& a) noexcept;

/// Independent closed-form eigendecomposition of 2^zeta A in double-double,
/// from the characteristic polynomial: lambda = mean +- r/2 with
/// r = hypot(a11 - a22, 2|a21|), and cos(phi) = sqrt((1 + |a11 - a22|/r)/2).
struct ClosedFormEvd {
  int zeta = 0;
  XD lambda1_scaled;
  XD lambda2_scaled;
  XD cos_phi;
  XD cos_alpha_sin_phi;
  XD sin_alpha_sin_phi;
};

ClosedFormEvd closed_form_evd2(const Herm2<double>& a) noexcept;

}  // namespace acrot
