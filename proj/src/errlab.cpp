// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#include "acrot/errlab.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace acrot {

double RelErr::approx() const {
  switch (flavor) {
    case Flavor::plus_inf:
      return std::numeric_limits<double>::infinity();
    case Flavor::minus_inf:
      return -std::numeric_limits<double>::infinity();
    case Flavor::finite:
      break;
  }
  return value.hi + value.lo;
}

template <Binary F>
RelErr rho(const XD& exact, F computed) noexcept {
  constexpr int scale = FormatTraits<F>::precision_bits + 1;  // 1/eps = 2^(p+1)
  RelErr r;
  if (xd_is_zero(exact)) {
    if (computed != F(0)) r.flavor = computed > F(0) ? RelErr::Flavor::plus_inf : RelErr::Flavor::minus_inf;
    return r;
  }
  // The ratio is scale invariant: bring both operands to the exponent of
  // the exact value, which is exact for `computed` unless it overflows.
  const double c = exact_scale(static_cast<double>(computed), -exact.e);
  if (!is_finite(c) && !xd_is_nan(exact)) {
    r.flavor = (c > 0.0) == (exact.m.hi > 0.0) ? RelErr::Flavor::plus_inf : RelErr::Flavor::minus_inf;
    return r;
  }
  const DD diff = dd_sub(DD{c}, exact.m);
  r.value = dd_scale(dd_div(diff, exact.m), scale);
  return r;
}

template <Binary F>
RelErr delta_det(const Rot2<F>& rot) noexcept {
  constexpr int scale = FormatTraits<F>::precision_bits + 1;
  const DD c2 = two_prod(rot.cos_phi, rot.cos_phi);
  const DD r2 = two_prod(rot.cos_alpha_sin_phi, rot.cos_alpha_sin_phi);
  const DD i2 = two_prod(rot.sin_alpha_sin_phi, rot.sin_alpha_sin_phi);
  const DD det = dd_add(dd_add(dd_sub(c2, DD{1.0}), r2), i2);
  RelErr r;
  r.value = dd_scale(det, scale);
  return r;
}

template RelErr rho<float>(const XD&, float) noexcept;
template RelErr rho<double>(const XD&, double) noexcept;
template RelErr delta_det<float>(const Rot2<float>&) noexcept;
template RelErr delta_det<double>(const Rot2<double>&) noexcept;

// ---------------------------------------------------------------------------
// Bound chain.
//
// Every factor in the chain is 1 + O(eps). Carrying such a factor as the
// pair (1, k) with value 1 + eps*k keeps all significant digits of k even
// when eps = 2^-113 lies below double-double resolution around 1.
// ---------------------------------------------------------------------------

namespace {

class Near1 {
 public:
  Near1(DD eps, DD k) : eps_(eps), k_(k) {}
  static Near1 one_plus(DD eps, double s) { return {eps, DD{s}}; }  // 1 + s*eps
  static Near1 one(DD eps) { return {eps, DD{0.0}}; }

  [[nodiscard]] const DD& k() const { return k_; }

  friend Near1 operator*(const Near1& a, const Near1& b) {
    // (1 + e a)(1 + e b) = 1 + e (a + b + e a b)
    return {a.eps_, a.k_ + b.k_ + a.eps_ * a.k_ * b.k_};
  }

  friend Near1 operator/(const Near1& a, const Near1& b) {
    // (1 + e a)/(1 + e b) = 1 + e (a - b)/(1 + e b)
    return {a.eps_, (a.k_ - b.k_) / (DD{1.0} + a.eps_ * b.k_)};
  }

  [[nodiscard]] Near1 pow(int n) const {
    Near1 r = one(eps_);
    for (int i = 0; i < n; ++i) r = r * *this;
    return r;
  }

  [[nodiscard]] Near1 sqrt() const {
    // sqrt(1 + e k) = 1 + e k / (1 + sqrt(1 + e k))
    const DD s = dd_sqrt(DD{1.0} + eps_ * k_);
    return {eps_, k_ / (DD{1.0} + s)};
  }

  /// sqrt((x^2 + 1) / 2)
  [[nodiscard]] Near1 rms_with_one() const {
    const Near1 sq = *this * *this;
    return Near1{eps_, dd_scale(sq.k_, -1)}.sqrt();
  }

 private:
  DD eps_;
  DD k_;
};

}  // namespace

std::string round_away(const DD& x, int decimals) {
  const bool negative = x.hi < 0.0;
  const DD ax = dd_abs(x);
  double pow10 = 1.0;
  for (int i = 0; i < decimals; ++i) pow10 *= 10.0;
  const DD v = ax * DD{pow10};
  double n = std::ceil(v.hi);
  if (n == v.hi && v.lo > 0.0) n += 1.0;
  const auto whole = static_cast<long long>(n);
  const auto p10 = static_cast<long long>(pow10);
  char buf[64];
  if (decimals == 0) {
    std::snprintf(buf, sizeof buf, "%s%lld", negative ? "-" : "", whole);
  } else {
    std::snprintf(buf, sizeof buf, "%s%lld.%0*lld", negative ? "-" : "", whole / p10, decimals, whole % p10);
  }
  return buf;
}

BoundConstants evaluate_theorem1_bounds(int p, int beta) {
  if (p != 23 && p != 52 && p != 112) throw std::invalid_argument("unsupported precision p = " + std::to_string(p));
  if (beta != 1 && beta != 2) throw std::invalid_argument("beta must be 1 or 2");

  const DD eps{std::ldexp(1.0, -p - 1)};
  const Near1 up = Near1::one_plus(eps, 1.0);     // 1 + eps
  const Near1 down = Near1::one_plus(eps, -1.0);  // 1 - eps
  const Near1 one = Near1::one(eps);

  const Near1 alpha_lo = beta == 2 ? down / up : one;
  const Near1 alpha_hi = beta == 2 ? up / down : one;
  const Near1 t_lo = down.pow(beta + 2) / up.pow(beta + 3);
  const Near1 t_hi = up.pow(beta + 2) / down.pow(beta + 3);
  const Near1 r_lo = t_lo.rms_with_one();
  const Near1 r_hi = t_hi.rms_with_one();
  const Near1 q_lo = r_lo * down.sqrt();
  const Near1 q_hi = r_hi * up.sqrt();
  const Near1 c_lo = down / q_hi;
  const Near1 c_hi = up / q_lo;
  const Near1 s_lo = t_lo * c_lo * down;
  const Near1 s_hi = t_hi * c_hi * up;
  const Near1 u_lo = alpha_lo * s_lo * down.pow(beta - 1);
  const Near1 u_hi = alpha_hi * s_hi * up.pow(beta - 1);

  BoundConstants b;
  b.p = p;
  b.beta = beta;
  b.c_minus = -c_lo.k();
  b.c_plus = c_hi.k();
  b.u_minus = -u_lo.k();
  b.u_plus = u_hi.k();
  b.rounded = {round_away(b.c_minus), round_away(b.c_plus), round_away(b.u_minus), round_away(b.u_plus)};
  return b;
}

BoundConstants worst_case_bounds(int beta) {
  BoundConstants w = evaluate_theorem1_bounds(23, beta);
  w.p = 0;
  for (int p : {52, 112}) {
    const BoundConstants b = evaluate_theorem1_bounds(p, beta);
    if (b.c_minus > w.c_minus) w.c_minus = b.c_minus;
    if (b.c_plus > w.c_plus) w.c_plus = b.c_plus;
    if (b.u_minus > w.u_minus) w.u_minus = b.u_minus;
    if (b.u_plus > w.u_plus) w.u_plus = b.u_plus;
  }
  w.rounded = {round_away(w.c_minus), round_away(w.c_plus), round_away(w.u_minus), round_away(w.u_plus)};
  return w;
}

Envelope Envelope::from(const BoundConstants& b) {
  auto parse = [](const std::string& s) { return DD{std::strtod(s.c_str(), nullptr)}; };
  Envelope e;
  e.cos_lo = -parse(b.rounded[0]);
  e.cos_hi = parse(b.rounded[1]);
  e.off_lo = -parse(b.rounded[2]);
  e.off_hi = parse(b.rounded[3]);
  return e;
}

const Envelope& Envelope::theorem1() {
  static const Envelope e = from(worst_case_bounds(2));
  return e;
}

const Envelope& Envelope::theorem1_beta1() {
  static const Envelope e = from(worst_case_bounds(1));
  return e;
}

// ---------------------------------------------------------------------------
// Statistics.
// ---------------------------------------------------------------------------

namespace {

bool inside(const RelErr& r, const DD& lo, const DD& hi) {
  return r.finite() && r.value > lo && r.value < hi;
}

/// Strict ordering of finite relative errors.
bool less(const RelErr& a, const RelErr& b) { return a.value < b.value; }

void offer_min(Extreme& e, const RelErr& v, std::uint64_t index, const Herm2<double>& input) {
  if (!v.finite()) return;
  if (!e.set || less(v, e.value) || (v.value == e.value.value && index < e.index)) {
    e = {true, v, index, input};
  }
}

void offer_max(Extreme& e, const RelErr& v, std::uint64_t index, const Herm2<double>& input) {
  if (!v.finite()) return;
  if (!e.set || less(e.value, v) || (v.value == e.value.value && index < e.index)) {
    e = {true, v, index, input};
  }
}

void offer_min(Extreme& e, const Extreme& other) {
  if (other.set) offer_min(e, other.value, other.index, other.witness);
}

void offer_max(Extreme& e, const Extreme& other) {
  if (other.set) offer_max(e, other.value, other.index, other.witness);
}

bool same_bits(double a, double b) { return to_bits(a) == to_bits(b); }

bool operator==(const Herm2<double>& a, const Herm2<double>& b) {
  return same_bits(a.a11, b.a11) && same_bits(a.a22, b.a22) && same_bits(a.re_a21, b.re_a21) &&
         same_bits(a.im_a21, b.im_a21);
}

}  // namespace

bool within_envelope(const Sample& s, const Envelope& env) {
  return inside(s.rho[kRhoCos], env.cos_lo, env.cos_hi) && inside(s.rho[kRhoRe], env.off_lo, env.off_hi) &&
         inside(s.rho[kRhoIm], env.off_lo, env.off_hi);
}

void accumulate(RunStats& stats, const Sample& s) {
  ++stats.n_total;
  for (const RelErr& r : s.rho) {
    if (!r.finite()) ++stats.n_inf_rho;
  }
  if (!s.qualifies) return;
  ++stats.n_qualifying;

  offer_min(stats.delta_min_j, s.delta_j, s.index, s.input);
  offer_max(stats.delta_max_j, s.delta_j, s.index, s.input);
  offer_min(stats.delta_min_l, s.delta_l, s.index, s.input);
  offer_max(stats.delta_max_l, s.delta_l, s.index, s.input);
  for (int i = 0; i < 3; ++i) {
    offer_min(stats.rho_min[i], s.rho[i], s.index, s.input);
    offer_max(stats.rho_max[i], s.rho[i], s.index, s.input);
  }

  if (!within_envelope(s, Envelope::theorem1())) ++stats.n_bound_violations;
  if (!s.delta_j.finite() || std::fabs(s.delta_j.approx()) > Envelope::theorem1().delta_abs_max) {
    ++stats.n_delta_violations;
  }
  if (s.beta == 1 && !within_envelope(s, Envelope::theorem1_beta1())) ++stats.n_beta1_excess;
}

RunStats merge(const RunStats& a, const RunStats& b) {
  RunStats r = a;
  offer_min(r.delta_min_j, b.delta_min_j);
  offer_max(r.delta_max_j, b.delta_max_j);
  offer_min(r.delta_min_l, b.delta_min_l);
  offer_max(r.delta_max_l, b.delta_max_l);
  for (int i = 0; i < 3; ++i) {
    offer_min(r.rho_min[i], b.rho_min[i]);
    offer_max(r.rho_max[i], b.rho_max[i]);
  }
  r.n_total += b.n_total;
  r.n_qualifying += b.n_qualifying;
  r.n_inf_rho += b.n_inf_rho;
  r.n_bound_violations += b.n_bound_violations;
  r.n_delta_violations += b.n_delta_violations;
  r.n_beta1_excess += b.n_beta1_excess;
  return r;
}

bool operator==(const RelErr& a, const RelErr& b) {
  return a.flavor == b.flavor && same_bits(a.value.hi, b.value.hi) && same_bits(a.value.lo, b.value.lo);
}

bool operator==(const Extreme& a, const Extreme& b) {
  if (a.set != b.set) return false;
  if (!a.set) return true;
  return a.value == b.value && a.index == b.index && a.witness == b.witness;
}

bool operator==(const RunStats& a, const RunStats& b) {
  return a.delta_min_j == b.delta_min_j && a.delta_max_j == b.delta_max_j && a.delta_min_l == b.delta_min_l &&
         a.delta_max_l == b.delta_max_l && a.rho_min == b.rho_min && a.rho_max == b.rho_max &&
         a.n_total == b.n_total && a.n_qualifying == b.n_qualifying && a.n_inf_rho == b.n_inf_rho &&
         a.n_bound_violations == b.n_bound_violations && a.n_delta_violations == b.n_delta_violations &&
         a.n_beta1_excess == b.n_beta1_excess;
}

double max_abs_delta(const RunStats& s, bool proposed) {
  const Extreme& lo = proposed ? s.delta_min_j : s.delta_min_l;
  const Extreme& hi = proposed ? s.delta_max_j : s.delta_max_l;
  double m = 0.0;
  if (lo.set) m = std::fmax(m, std::fabs(lo.value.approx()));
  if (hi.set) m = std::fmax(m, std::fabs(hi.value.approx()));
  return m;
}

}  // namespace acrot
