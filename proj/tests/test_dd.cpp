// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "acrot/dd.hpp"
#include "mp_oracle.hpp"

namespace acrot {
namespace {

using test::Mp;

// Documented accuracy of each operation, relative, for normal results.
constexpr double kAddBound = 0x1p-104;
constexpr double kMulBound = 0x1p-104;
constexpr double kDivBound = 0x1p-103;
constexpr double kSqrtBound = 0x1p-103;
constexpr double kHypotBound = 0x1p-102;

DD random_dd(std::mt19937_64& rng, int lo = -300, int hi = 300) {
  const double h = test::random_in_binades<double>(rng, lo, hi);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return fast_two_sum(h, h * 0x1p-53 * u(rng));
}

bool is_normalized(const DD& x) { return x.hi + x.lo == x.hi; }

TEST(ErrorFreeTransforms, TwoSumIsExact) {
  std::mt19937_64 rng(1);
  Mp sum, ref;
  for (int i = 0; i < 100000; ++i) {
    const double a = test::random_in_binades<double>(rng, -60, 60);
    const double b = test::random_in_binades<double>(rng, -60, 60);
    const DD s = two_sum(a, b);
    EXPECT_EQ(s.hi, a + b);
    sum.set(s);
    mpfr_set_d(ref.get(), a, MPFR_RNDN);
    mpfr_add_d(ref.get(), ref.get(), b, MPFR_RNDN);
    ASSERT_EQ(mpfr_cmp(sum.get(), ref.get()), 0);
  }
}

TEST(ErrorFreeTransforms, TwoProdIsExact) {
  std::mt19937_64 rng(2);
  Mp prod, ref;
  for (int i = 0; i < 100000; ++i) {
    const double a = test::random_in_binades<double>(rng, -400, 400);
    const double b = test::random_in_binades<double>(rng, -400, 400);
    const DD p = two_prod(a, b);
    EXPECT_EQ(p.hi, a * b);
    prod.set(p);
    mpfr_set_d(ref.get(), a, MPFR_RNDN);
    mpfr_mul_d(ref.get(), ref.get(), b, MPFR_RNDN);
    ASSERT_EQ(mpfr_cmp(prod.get(), ref.get()), 0);
  }
}

TEST(DoubleDouble, AddAccuracy) {
  std::mt19937_64 rng(3);
  Mp ref;
  for (int i = 0; i < 200000; ++i) {
    const DD a = random_dd(rng, -30, 30);
    DD b = random_dd(rng, -30, 30);
    if (i % 4 == 0) b = dd_neg(dd_add(a, random_dd(rng, -90, -60)));  // cancellation
    const DD r = dd_add(a, b);
    ASSERT_TRUE(is_normalized(r));
    mpfr_add(ref.get(), Mp(a).get(), Mp(b).get(), MPFR_RNDN);
    if (mpfr_zero_p(ref.get())) {
      ASSERT_EQ(r.hi, 0.0);
      continue;
    }
    ASSERT_LE(ref.rel_err(r), kAddBound) << i;
  }
}

TEST(DoubleDouble, MulAccuracy) {
  std::mt19937_64 rng(4);
  Mp ref;
  for (int i = 0; i < 200000; ++i) {
    const DD a = random_dd(rng);
    const DD b = random_dd(rng);
    const DD r = dd_mul(a, b);
    ASSERT_TRUE(is_normalized(r));
    mpfr_mul(ref.get(), Mp(a).get(), Mp(b).get(), MPFR_RNDN);
    ASSERT_LE(ref.rel_err(r), kMulBound) << i;
  }
}

TEST(DoubleDouble, DivAccuracy) {
  std::mt19937_64 rng(5);
  Mp ref;
  for (int i = 0; i < 200000; ++i) {
    const DD a = random_dd(rng);
    const DD b = random_dd(rng);
    const DD r = dd_div(a, b);
    ASSERT_TRUE(is_normalized(r));
    mpfr_div(ref.get(), Mp(a).get(), Mp(b).get(), MPFR_RNDN);
    ASSERT_LE(ref.rel_err(r), kDivBound) << i;
  }
}

TEST(DoubleDouble, SqrtAccuracy) {
  std::mt19937_64 rng(6);
  Mp ref;
  for (int i = 0; i < 200000; ++i) {
    const DD a = dd_abs(random_dd(rng));
    const DD r = dd_sqrt(a);
    ASSERT_TRUE(is_normalized(r));
    mpfr_sqrt(ref.get(), Mp(a).get(), MPFR_RNDN);
    ASSERT_LE(ref.rel_err(r), kSqrtBound) << i;
  }
}

TEST(DoubleDouble, HypotAccuracyAcrossRange) {
  std::mt19937_64 rng(7);
  Mp ref, t;
  for (int i = 0; i < 200000; ++i) {
    // Below about 2^-969 the low word is subnormal and a plain pair no
    // longer holds 106 bits; that range is the job of XD.
    const DD a = random_dd(rng, -900, 1020);
    const DD b = i % 2 ? random_dd(rng, -900, 1020) : dd_mul(a, random_dd(rng, -40, 0));
    const DD r = dd_hypot(a, b);
    mpfr_sqr(ref.get(), Mp(a).get(), MPFR_RNDN);
    mpfr_sqr(t.get(), Mp(b).get(), MPFR_RNDN);
    mpfr_add(ref.get(), ref.get(), t.get(), MPFR_RNDN);
    mpfr_sqrt(ref.get(), ref.get(), MPFR_RNDN);
    ASSERT_LE(ref.rel_err(r), kHypotBound) << i;
  }
}

TEST(DoubleDouble, LowWordUnderflowLosesAccuracy) {
  // The limitation XD exists for: 2^-1000 (1 + 2^-80) is not a DD.
  const DD x = fast_two_sum(0x1p-1000, std::ldexp(1.0, -1080));
  EXPECT_EQ(x.lo, 0.0);
  const XD y = xd_mul(XD{0x1p-1000}, XD{fast_two_sum(1.0, 0x1p-80)});
  EXPECT_EQ(y.e, -1000);
  EXPECT_EQ(y.m.lo, 0x1p-80);
}

XD random_xd(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> e(-3000, 3000);
  return XD::make(random_dd(rng, 0, 1), e(rng));
}

TEST(ExtendedDoubleDouble, ArithmeticAccuracy) {
  std::mt19937_64 rng(9);
  Mp ref(400), t(400);
  for (int i = 0; i < 100000; ++i) {
    const XD a = random_xd(rng);
    XD b = random_xd(rng);
    if (i % 3 == 0) b = xd_scale(a, static_cast<int>(rng() % 60) - 30);
    const Mp ma(a, 400), mb(b, 400);

    mpfr_add(ref.get(), ma.get(), mb.get(), MPFR_RNDN);
    if (!mpfr_zero_p(ref.get())) {
      ASSERT_LE(ref.rel_err(xd_add(a, b)), kAddBound) << i;
    }
    mpfr_mul(ref.get(), ma.get(), mb.get(), MPFR_RNDN);
    ASSERT_LE(ref.rel_err(xd_mul(a, b)), kMulBound) << i;
    mpfr_div(ref.get(), ma.get(), mb.get(), MPFR_RNDN);
    ASSERT_LE(ref.rel_err(xd_div(a, b)), kDivBound) << i;
    mpfr_abs(t.get(), ma.get(), MPFR_RNDN);
    mpfr_sqrt(ref.get(), t.get(), MPFR_RNDN);
    ASSERT_LE(ref.rel_err(xd_sqrt(xd_abs(a))), kSqrtBound) << i;
    mpfr_hypot(ref.get(), ma.get(), mb.get(), MPFR_RNDN);
    ASSERT_LE(ref.rel_err(xd_hypot(a, b)), kHypotBound) << i;

    const int cmp = mpfr_cmp(ma.get(), mb.get());
    ASSERT_EQ(xd_compare(a, b), cmp <=> 0) << i;
  }
}

TEST(ExtendedDoubleDouble, SpecialValues) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(xd_is_nan(xd_div(XD{1.0}, XD{0.0})));
  EXPECT_EQ(xd_div(XD{1.0}, XD{inf}).m.hi, 0.0);
  EXPECT_EQ(xd_add(XD{inf}, XD::make(DD{1.0}, -3000)).m.hi, inf);
  EXPECT_EQ(xd_hypot(XD{0.0}, XD{-3.0}).approx(), 3.0);
  EXPECT_TRUE(sign_bit(xd_add(XD{-0.0}, XD{-0.0})));
  EXPECT_TRUE(XD{-0.0} == XD{0.0});
  EXPECT_TRUE(xd_scale(XD{1.0}, -5000) < XD{0x1p-1074});
  EXPECT_TRUE(XD{-inf} < xd_scale(XD{-1.0}, 5000));
  EXPECT_EQ(xd_scale(XD{3.0}, -1100).to_dd().hi, 0.0);
  EXPECT_EQ(XD{0x1.8p-1030}.approx(), 0x1.8p-1030);
}

TEST(DoubleDouble, SpecialValues) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(dd_is_nan(dd_div(DD{1.0}, DD{0.0})));
  EXPECT_EQ(dd_div(DD{0x1p1000}, DD{0x1p-100}).hi, inf);
  EXPECT_EQ(dd_div(DD{0.0}, DD{3.0}).hi, 0.0);
  EXPECT_EQ(dd_sqrt(DD{0.0}).hi, 0.0);
  EXPECT_TRUE(dd_is_nan(dd_sqrt(DD{-1.0})));
  EXPECT_EQ(dd_sqrt(DD{inf}).hi, inf);
  EXPECT_EQ(dd_add(DD{inf}, DD{1.0}).hi, inf);
  EXPECT_EQ(dd_hypot(DD{0.0}, DD{0.0}).hi, 0.0);
  EXPECT_EQ(dd_hypot(DD{inf}, DD{1.0}).hi, inf);
  const DD h = dd_hypot(DD{0x1p1023}, DD{0x1p1023});
  EXPECT_EQ(h.hi, std::sqrt(2.0) * 0x1p1023);
}

TEST(DoubleDouble, Ordering) {
  EXPECT_TRUE(DD(1.0) < DD(fast_two_sum(1.0, 0x1p-80)));
  EXPECT_TRUE(DD(fast_two_sum(1.0, -0x1p-80)) < DD(1.0));
  EXPECT_TRUE(DD(0.0) == DD(-0.0));
  EXPECT_FALSE(dd_nan == dd_nan);
  EXPECT_EQ(dd_compare(dd_nan, DD(1.0)), std::partial_ordering::unordered);
}

TEST(ExpansionSign, MatchesExactSum) {
  std::mt19937_64 rng(8);
  Mp sum(4000);
  std::uniform_int_distribution<int> len(1, 12);
  for (int i = 0; i < 50000; ++i) {
    std::vector<double> terms(static_cast<std::size_t>(len(rng)));
    for (double& t : terms) t = test::random_in_binades<double>(rng, -200, 200);
    if (i % 2 == 0) {
      // Force near-cancellation: append the negated rounded sum and its error.
      double s = 0.0;
      for (double t : terms) s += t;
      terms.push_back(-s);
    }
    mpfr_set_zero(sum.get(), 1);
    for (double t : terms) mpfr_add_d(sum.get(), sum.get(), t, MPFR_RNDN);
    ASSERT_EQ(expansion_sign(terms), mpfr_sgn(sum.get())) << i;
  }
  const double zero[] = {1.0, -1.0, 0x1p-60, -0x1p-60};
  EXPECT_EQ(expansion_sign(zero), 0);
  EXPECT_EQ(expansion_sign(std::span<const double>{}), 0);
}

}  // namespace
}  // namespace acrot
