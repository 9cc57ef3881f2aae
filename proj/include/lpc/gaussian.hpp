#pragma once

// Exact arithmetic in Z[i] and 2x2 matrices over it.

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <tuple>

#include "lpc/symmetric_space.hpp"

namespace lpc {

struct GaussInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  constexpr std::int64_t norm() const { return re * re + im * im; }
  constexpr GaussInt conj() const { return {re, -im}; }
  constexpr bool is_unit() const { return norm() == 1; }
  Complex to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }

  friend constexpr GaussInt operator+(GaussInt x, GaussInt y) { return {x.re + y.re, x.im + y.im}; }
  friend constexpr GaussInt operator-(GaussInt x, GaussInt y) { return {x.re - y.re, x.im - y.im}; }
  friend constexpr GaussInt operator-(GaussInt x) { return {-x.re, -x.im}; }
  friend constexpr GaussInt operator*(GaussInt x, GaussInt y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend constexpr bool operator==(GaussInt, GaussInt) = default;
  friend constexpr auto operator<=>(GaussInt, GaussInt) = default;
};

namespace detail {

// Nearest integer to num / den, ties away from zero; den > 0.
constexpr std::int64_t round_div(std::int64_t num, std::int64_t den) {
  const std::int64_t twice = 2 * num;
  return twice >= 0 ? (twice + den) / (2 * den) : -((-twice + den) / (2 * den));
}

}  // namespace detail

/// Quotient rounded to the nearest Gaussian integer; the remainder
/// x - q*y then has norm at most norm(y)/2.
constexpr GaussInt div_round(GaussInt x, GaussInt y) {
  const GaussInt num = x * y.conj();
  const std::int64_t den = y.norm();
  return {detail::round_div(num.re, den), detail::round_div(num.im, den)};
}

struct GaussGcd {
  GaussInt g;
  GaussInt x;
  GaussInt y;  // a*x + b*y == g
};

/// Extended Euclid in Z[i].
constexpr GaussGcd gcd_ext(GaussInt a, GaussInt b) {
  GaussInt r0 = a, r1 = b;
  GaussInt s0{1, 0}, s1{0, 0};
  GaussInt t0{0, 0}, t1{1, 0};
  while (r1.norm() != 0) {
    const GaussInt q = div_round(r0, r1);
    const GaussInt r2 = r0 - q * r1;
    const GaussInt s2 = s0 - q * s1;
    const GaussInt t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
    t0 = t1;
    t1 = t2;
  }
  return {r0, s0, t0};
}

/// [[a, b], [c, d]] over Z[i].
struct GaussMatrix {
  GaussInt a, b, c, d;

  constexpr GaussInt det() const { return a * d - b * c; }
  constexpr std::int64_t frobenius_sq() const { return a.norm() + b.norm() + c.norm() + d.norm(); }
  constexpr GaussMatrix conj() const { return {a.conj(), b.conj(), c.conj(), d.conj()}; }
  constexpr auto as_tuple() const {
    return std::make_tuple(a.re, a.im, b.re, b.im, c.re, c.im, d.re, d.im);
  }
  GroupElement to_group_element() const {
    return GroupElement(a.to_complex(), b.to_complex(), c.to_complex(), d.to_complex());
  }

  friend constexpr bool operator==(const GaussMatrix&, const GaussMatrix&) = default;
  friend constexpr bool operator<(const GaussMatrix& x, const GaussMatrix& y) {
    return x.as_tuple() < y.as_tuple();
  }
};

}  // namespace lpc
