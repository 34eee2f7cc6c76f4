// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "acrot/dd.hpp"
#include "acrot/jaev2.hpp"

namespace acrot {

/// A relative error in units of the format's machine precision.
struct RelErr {
  enum class Flavor { finite, plus_inf, minus_inf };

  DD value;
  Flavor flavor = Flavor::finite;

  [[nodiscard]] bool finite() const { return flavor == Flavor::finite; }
  [[nodiscard]] double approx() const;
};

/// (computed - exact) / (exact * eps). For exact == 0 the result is 0 if
/// computed == 0 and +-inf otherwise.
template <Binary F>
RelErr rho(const XD& exact, F computed) noexcept;
template <Binary F>
RelErr rho(const DD& exact, F computed) noexcept {
  return rho(XD{exact}, computed);
}

/// (cos^2 + re^2 + im^2 - 1) / eps, the departure of det U from one.
template <Binary F>
RelErr delta_det(const Rot2<F>& rot) noexcept;

/// Error bound coefficients in units of eps, each rounded away from zero to
/// eight decimals: cos(phi) has relative error in (-c_minus, c_plus), both
/// off-diagonal parts in (-u_minus, u_plus).
struct BoundConstants {
  int p = 0;
  int beta = 2;
  DD c_minus;
  DD c_plus;
  DD u_minus;
  DD u_plus;
  /// The same four values rounded away from zero, e.g. "6.00000017".
  std::array<std::string, 4> rounded;
};

/// Evaluates the bound chain for p significand bits (23, 52 or 112) and
/// beta (1 or 2). Throws std::invalid_argument otherwise.
BoundConstants evaluate_theorem1_bounds(int p, int beta);

/// Coefficient-wise maximum over p in {23, 52, 112} for the given beta.
BoundConstants worst_case_bounds(int beta = 2);

/// x rounded away from zero to `decimals` places, as a decimal string.
std::string round_away(const DD& x, int decimals = 8);

/// Acceptance envelope in eps units (open intervals).
struct Envelope {
  DD cos_lo, cos_hi;
  DD off_lo, off_hi;
  double delta_abs_max = 40.0;

  /// Envelope from the rounded worst-case bound coefficients.
  static Envelope from(const BoundConstants& b);
  static const Envelope& theorem1();
  static const Envelope& theorem1_beta1();
};

/// One matrix's worth of measurements.
struct Sample {
  std::uint64_t index = 0;
  Herm2<double> input;  // binary32 inputs are embedded exactly
  bool qualifies = true;
  int beta = 2;
  RelErr delta_j;
  RelErr delta_l;
  std::array<RelErr, 3> rho;  // cos(phi), Re u21, Im u21
};

enum RhoIndex : int { kRhoCos = 0, kRhoRe = 1, kRhoIm = 2 };

struct Extreme {
  bool set = false;
  RelErr value;
  std::uint64_t index = 0;
  Herm2<double> witness;
};

/// Per-run extremal statistics over qualifying inputs, with witnesses.
struct RunStats {
  Extreme delta_min_j, delta_max_j;
  Extreme delta_min_l, delta_max_l;
  std::array<Extreme, 3> rho_min, rho_max;
  std::uint64_t n_total = 0;
  std::uint64_t n_qualifying = 0;
  std::uint64_t n_inf_rho = 0;
  /// Qualifying inputs outside the bound envelope (gated).
  std::uint64_t n_bound_violations = 0;
  /// Qualifying inputs with |delta_j| above the envelope (gated).
  std::uint64_t n_delta_violations = 0;
  /// Qualifying beta = 1 inputs outside the tighter beta = 1 envelope
  /// (reported only).
  std::uint64_t n_beta1_excess = 0;
};

bool within_envelope(const Sample& s, const Envelope& env);

void accumulate(RunStats& stats, const Sample& sample);

/// Order-independent reduction; ties on a value keep the smaller index.
RunStats merge(const RunStats& a, const RunStats& b);

bool operator==(const RelErr& a, const RelErr& b);
bool operator==(const Extreme& a, const Extreme& b);
bool operator==(const RunStats& a, const RunStats& b);

/// max(|delta_min|, |delta_max|) for the proposed (true) or reference
/// (false) algorithm; 0 if nothing was recorded.
double max_abs_delta(const RunStats& s, bool proposed);

}  // namespace acrot
