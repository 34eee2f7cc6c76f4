// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#include "acrot/jaev2.hpp"

namespace acrot {

namespace {

/// A value whose exact counterpart is nonzero came out zero or subnormal.
template <Binary F>
bool lost_to_underflow(F computed, bool exact_nonzero) {
  return exact_nonzero && abs_value(computed) < smallest_normal<F>;
}

template <Binary F>
struct Pipeline {
  Intermediates<F> t;
  Rot2<F> rot;
  F lambda1{};
  F lambda2{};
};

template <Binary F>
void rotate(Pipeline<F>& s) noexcept {
  auto& t = s.t;
  const Herm2<F>& a = t.a_scaled;

  // |a21'| exp(i alpha) has been set by the caller.
  t.o_twice = t.abs_a21 * F(2);
  t.a_diff = a.a11 - a.a22;
  const F abs_diff = abs_value(t.a_diff);
  t.quotient = t.o_twice / abs_diff;
  t.tan_2phi = tangent_double_angle(t.o_twice, t.a_diff);
  t.tan_phi = tangent_half(t.tan_2phi);
  const CosSin<F> cs = cosine_sine(t.tan_phi);
  t.sec2_phi = cs.sec2_phi;
  t.cos_phi = cs.cos_phi;
  t.sin_phi = cs.sin_phi;

  s.rot.cos_phi = cs.cos_phi;
  s.rot.cos_alpha_sin_phi = t.cos_alpha * cs.sin_phi;
  s.rot.sin_alpha_sin_phi = t.sin_alpha * cs.sin_phi;

  const auto [l1, l2] = eigenvalues_scaled(a, t.tan_phi, t.sec2_phi, t.o_twice);
  s.lambda1 = l1;
  s.lambda2 = l2;

  bool under = is_subnormal(t.a_diff);
  under |= t.o_twice != F(0) && t.a_diff != F(0) && is_finite(t.quotient) &&
           lost_to_underflow(t.quotient, true);
  under |= lost_to_underflow(t.tan_phi, t.tan_2phi != F(0));
  under |= lost_to_underflow(t.sin_phi, t.tan_phi != F(0));
  under |= lost_to_underflow(s.rot.cos_alpha_sin_phi, t.cos_alpha != F(0) && t.sin_phi != F(0));
  under |= lost_to_underflow(s.rot.sin_alpha_sin_phi, t.sin_alpha != F(0) && t.sin_phi != F(0));
  t.trace_underflow |= under;
}

template <Binary F>
Evd2Result<F> finish(const Pipeline<F>& s, bool backscale, Intermediates<F>* trace) noexcept {
  Evd2Result<F> r;
  r.rot = s.rot;
  r.lambda1_scaled = s.lambda1;
  r.lambda2_scaled = s.lambda2;
  r.back_exponent = -s.t.zeta;
  if (backscale) {
    r.lambda1 = exact_scale(s.lambda1, r.back_exponent);
    r.lambda2 = exact_scale(s.lambda2, r.back_exponent);
  }
  if (trace != nullptr) *trace = s.t;
  return r;
}

}  // namespace

template <Binary F>
int compute_zeta(const Herm2<F>& a) noexcept {
  constexpr int eta = FormatTraits<F>::max_exp - 3;
  constexpr F tiny = smallest_subnormal<F>;
  const int z11 = exponent_of(max_num(abs_value(a.a11), tiny));
  const int z22 = exponent_of(max_num(abs_value(a.a22), tiny));
  const int z21r = exponent_of(max_num(abs_value(a.re_a21), tiny));
  const int z21i = exponent_of(max_num(abs_value(a.im_a21), tiny));
  // max{...} written out with >=; on ties the earlier operand is kept.
  int m = (z11 >= z22) ? z11 : z22;
  m = (m >= z21r) ? m : z21r;
  m = (m >= z21i) ? m : z21i;
  return eta - m;
}

template <Binary F>
Scaled<F> scale_matrix(const Herm2<F>& a, int zeta) noexcept {
  Scaled<F> s;
  auto one = [&](F x) {
    const F y = exact_scale(x, zeta);
    if (exact_scale(y, -zeta) != x) s.inexact_underflow = true;
    return y;
  };
  s.a.a11 = one(a.a11);
  s.a.a22 = one(a.a22);
  s.a.re_a21 = one(a.re_a21);
  s.a.im_a21 = one(a.im_a21);
  return s;
}

template <Binary F>
Polar<F> polar_a21(const Herm2<F>& a_scaled) noexcept {
  constexpr F tiny = smallest_subnormal<F>;
  Polar<F> p;
  const F abs_re = abs_value(a_scaled.re_a21);
  const F abs_im = abs_value(a_scaled.im_a21);
  p.abs_a21 = cr_hypot(abs_re, abs_im);
  // 0/0 = NaN in the first quotient is turned into 1 by min_num.
  p.cos_alpha = copy_sign(min_num(abs_re / p.abs_a21, F(1)), a_scaled.re_a21);
  p.sin_alpha = a_scaled.im_a21 / max_num(p.abs_a21, tiny);
  p.beta = (abs_re == F(0) || abs_im == F(0)) ? 1 : 2;
  return p;
}

template <Binary F>
F tangent_double_angle(F o_twice, F a_diff) noexcept {
  // NaN from 0/0 becomes +0; +inf from x/0 is clamped to nu.
  return copy_sign(min_num(max_num(o_twice / abs_value(a_diff), F(0)), largest<F>), a_diff);
}

template <Binary F>
F tangent_half(F tan_2phi) noexcept {
  // With rounding to nearest 1 + hypot(nu, 1) = nu, so no overflow.
  return tan_2phi / (F(1) + cr_hypot(tan_2phi, F(1)));
}

template <Binary F>
CosSin<F> cosine_sine(F tan_phi) noexcept {
  CosSin<F> c;
  c.sec2_phi = fused_mul_add(tan_phi, tan_phi, F(1));
  c.cos_phi = cr_rsqrt(c.sec2_phi);
  c.sin_phi = tan_phi * c.cos_phi;
  return c;
}

template <Binary F>
std::pair<F, F> eigenvalues_scaled(const Herm2<F>& a, F tan_phi, F sec2_phi, F o_twice) noexcept {
  const F l1 = fused_mul_add(tan_phi, fused_mul_add(a.a22, tan_phi, o_twice), a.a11) / sec2_phi;
  const F l2 = fused_mul_add(tan_phi, fused_mul_add(a.a11, tan_phi, -o_twice), a.a22) / sec2_phi;
  return {l1, l2};
}

template <Binary F>
Evd2Result<F> jaev2(const Herm2<F>& a, bool backscale, Intermediates<F>* trace) noexcept {
  Pipeline<F> s;
  auto& t = s.t;
  t.zeta = compute_zeta(a);
  const Scaled<F> sc = scale_matrix(a, t.zeta);
  t.a_scaled = sc.a;
  t.scale_inexact_underflow = sc.inexact_underflow;

  const Polar<F> p = polar_a21(t.a_scaled);
  t.abs_a21 = p.abs_a21;
  t.cos_alpha = p.cos_alpha;
  t.sin_alpha = p.sin_alpha;
  t.beta = p.beta;
  const F abs_re = abs_value(t.a_scaled.re_a21);
  const F abs_im = abs_value(t.a_scaled.im_a21);
  t.polar_danger = abs_re == smallest_subnormal<F> && abs_im == smallest_subnormal<F>;
  t.trace_underflow = is_subnormal(p.abs_a21) || lost_to_underflow(p.cos_alpha, abs_re != F(0)) ||
                      lost_to_underflow(p.sin_alpha, abs_im != F(0));

  rotate(s);
  return finish(s, backscale, trace);
}

template <Binary F>
Evd2Result<F> jasv2(F a11, F a22, F a21, bool backscale, Intermediates<F>* trace) noexcept {
  Pipeline<F> s;
  auto& t = s.t;
  const Herm2<F> a{a11, a22, a21, F(0)};
  t.zeta = compute_zeta(a);
  const Scaled<F> sc = scale_matrix(a, t.zeta);
  t.a_scaled = sc.a;
  t.scale_inexact_underflow = sc.inexact_underflow;

  // The polar form of a real number: |a21'| and its sign.
  t.abs_a21 = abs_value(t.a_scaled.re_a21);
  t.cos_alpha = copy_sign(F(1), t.a_scaled.re_a21);
  t.sin_alpha = F(0);
  t.beta = 1;
  t.trace_underflow = is_subnormal(t.abs_a21);

  rotate(s);
  return finish(s, backscale, trace);
}

#define ACROT_INSTANTIATE(F)                                                                        \
  template int compute_zeta<F>(const Herm2<F>&) noexcept;                                           \
  template Scaled<F> scale_matrix<F>(const Herm2<F>&, int) noexcept;                                \
  template Polar<F> polar_a21<F>(const Herm2<F>&) noexcept;                                         \
  template F tangent_double_angle<F>(F, F) noexcept;                                                \
  template F tangent_half<F>(F) noexcept;                                                           \
  template CosSin<F> cosine_sine<F>(F) noexcept;                                                    \
  template std::pair<F, F> eigenvalues_scaled<F>(const Herm2<F>&, F, F, F) noexcept;                \
  template Evd2Result<F> jaev2<F>(const Herm2<F>&, bool, Intermediates<F>*) noexcept;               \
  template Evd2Result<F> jasv2<F>(F, F, F, bool, Intermediates<F>*) noexcept;

ACROT_INSTANTIATE(float)
ACROT_INSTANTIATE(double)

#undef ACROT_INSTANTIATE

}  // namespace acrot
