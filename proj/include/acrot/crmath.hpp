// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <concepts>
#include <cstdint>
#include <limits>

namespace acrot {

/// Binary interchange format parameters. Only `float` (binary32) and
/// `double` (binary64) are supported.
template <class F>
struct FormatTraits;

template <>
struct FormatTraits<float> {
  using Bits = std::uint32_t;
  static constexpr int precision_bits = 23;  // p, non-implied
  static constexpr int max_exp = 128;        // FLT_MAX_EXP
  static constexpr int min_exp = -125;       // FLT_MIN_EXP
  static constexpr int exponent_bias = 127;
  static constexpr const char* name = "binary32";
};

template <>
struct FormatTraits<double> {
  using Bits = std::uint64_t;
  static constexpr int precision_bits = 52;
  static constexpr int max_exp = 1024;
  static constexpr int min_exp = -1021;
  static constexpr int exponent_bias = 1023;
  static constexpr const char* name = "binary64";
};

template <class F>
concept Binary = std::same_as<F, float> || std::same_as<F, double>;

/// Machine precision 2^(-p-1).
template <Binary F>
inline constexpr F machine_eps = std::numeric_limits<F>::epsilon() / 2;
/// Largest finite value (nu).
template <Binary F>
inline constexpr F largest = std::numeric_limits<F>::max();
/// Smallest positive normal value (mu).
template <Binary F>
inline constexpr F smallest_normal = std::numeric_limits<F>::min();
/// Smallest positive subnormal value.
template <Binary F>
inline constexpr F smallest_subnormal = std::numeric_limits<F>::denorm_min();

template <Binary F>
constexpr auto to_bits(F x) noexcept {
  return std::bit_cast<typename FormatTraits<F>::Bits>(x);
}

template <Binary F>
constexpr F from_bits(typename FormatTraits<F>::Bits b) noexcept {
  return std::bit_cast<F>(b);
}

namespace detail {
template <Binary F>
inline constexpr typename FormatTraits<F>::Bits sign_mask =
    typename FormatTraits<F>::Bits{1} << (sizeof(F) * 8 - 1);
template <Binary F>
inline constexpr typename FormatTraits<F>::Bits frac_mask =
    (typename FormatTraits<F>::Bits{1} << FormatTraits<F>::precision_bits) - 1;
template <Binary F>
inline constexpr int exp_field_max = 2 * FormatTraits<F>::max_exp - 1;

template <Binary F>
constexpr int exponent_field(F x) noexcept {
  return static_cast<int>((to_bits(x) & ~sign_mask<F>) >> FormatTraits<F>::precision_bits);
}
}  // namespace detail

template <Binary F>
constexpr bool sign_bit(F x) noexcept {
  return (to_bits(x) & detail::sign_mask<F>) != 0;
}

template <Binary F>
constexpr bool is_nan(F x) noexcept {
  return (to_bits(x) & ~detail::sign_mask<F>) > to_bits(std::numeric_limits<F>::infinity());
}

template <Binary F>
constexpr bool is_inf(F x) noexcept {
  return (to_bits(x) & ~detail::sign_mask<F>) == to_bits(std::numeric_limits<F>::infinity());
}

template <Binary F>
constexpr bool is_finite(F x) noexcept {
  return detail::exponent_field(x) != detail::exp_field_max<F>;
}

/// Nonzero and below the smallest normal magnitude.
template <Binary F>
constexpr bool is_subnormal(F x) noexcept {
  return detail::exponent_field(x) == 0 && (to_bits(x) & ~detail::sign_mask<F>) != 0;
}

template <Binary F>
constexpr F abs_value(F x) noexcept {
  return from_bits<F>(to_bits(x) & ~detail::sign_mask<F>);
}

/// Magnitude of `x` with the sign bit of `y` (NaN signs included).
template <Binary F>
constexpr F copy_sign(F x, F y) noexcept {
  return from_bits<F>((to_bits(x) & ~detail::sign_mask<F>) | (to_bits(y) & detail::sign_mask<F>));
}

/// IEEE-754 maxNum with NaN suppression: if exactly one operand is NaN the
/// other is returned. -0 is ordered below +0 so results are bit-reproducible.
template <Binary F>
constexpr F max_num(F x, F y) noexcept {
  if (is_nan(x)) return y;
  if (is_nan(y)) return x;
  if (x == y) return sign_bit(x) ? y : x;
  return x > y ? x : y;
}

/// minNum counterpart of `max_num`.
template <Binary F>
constexpr F min_num(F x, F y) noexcept {
  if (is_nan(x)) return y;
  if (is_nan(y)) return x;
  if (x == y) return sign_bit(x) ? x : y;
  return x < y ? x : y;
}

/// Exponent `e` with |x| = f * 2^e, f in [0.5, 1) (the C frexp convention).
/// Precondition: x finite and nonzero.
template <Binary F>
constexpr int exponent_of(F x) noexcept {
  using T = FormatTraits<F>;
  const int field = detail::exponent_field(x);
  if (field != 0) return field - T::exponent_bias + 1;
  const auto frac = to_bits(x) & detail::frac_mask<F>;
  // subnormal: value = frac * 2^(min_exp - 1 - p)
  const int width = static_cast<int>(std::bit_width(frac));
  return width + T::min_exp - 1 - T::precision_bits;
}

namespace detail {
template <Binary F>
F scale_slow(F x, int k) noexcept;
}

/// x * 2^k rounded once to nearest-even. Exact whenever the result is normal.
template <Binary F>
inline F exact_scale(F x, int k) noexcept {
  using T = FormatTraits<F>;
  const int field = detail::exponent_field(x);
  if (field == 0 || field == detail::exp_field_max<F>) {
    if ((to_bits(x) & ~detail::sign_mask<F>) == 0 || field != 0) return x;  // 0, inf, NaN
    return detail::scale_slow(x, k);
  }
  if (k > -2 * T::max_exp && k < 2 * T::max_exp) {
    const int target = field + k;
    if (target >= 1 && target < detail::exp_field_max<F>) {
      using Bits = typename T::Bits;
      const Bits shifted = static_cast<Bits>(static_cast<Bits>(target) << T::precision_bits);
      return from_bits<F>((to_bits(x) & (detail::sign_mask<F> | detail::frac_mask<F>)) | shifted);
    }
  }
  return detail::scale_slow(x, k);
}

/// Next representable value toward +inf / -inf (finite, non-NaN input).
template <Binary F>
F next_up(F x) noexcept;
template <Binary F>
F next_down(F x) noexcept;

/// Software fused multiply-add, a single rounding of x*y + z.
template <Binary F>
F soft_fma(F x, F y, F z) noexcept;

/// fl(x*y + z) with one rounding. Uses the FMA instruction when the build
/// targets it, otherwise `soft_fma`.
template <Binary F>
inline F fused_mul_add(F x, F y, F z) noexcept {
#if defined(__FMA__)
  if constexpr (std::same_as<F, float>) {
    return __builtin_fmaf(x, y, z);
  } else {
    return __builtin_fma(x, y, z);
  }
#else
  return soft_fma(x, y, z);
#endif
}

/// Correctly rounded sqrt(x^2 + y^2) (round to nearest, ties to even).
/// hypot(+-inf, anything) = +inf, including NaN; otherwise NaN propagates.
template <Binary F>
F cr_hypot(F x, F y) noexcept;

/// Correctly rounded 1/sqrt(x). rsqrt(+0) = +inf, rsqrt(-0) = -inf,
/// rsqrt(+inf) = +0, NaN for x < 0.
template <Binary F>
F cr_rsqrt(F x) noexcept;

}  // namespace acrot
