#pragma once

// Modified Bessel functions of the second kind, orders 0 and 1, for real
// positive arguments.
//
//   x <= 2 : ascending series
//   x >  2 : Steed's continued fraction CF2 with Temme's normalisation,
//            evaluated in exponentially scaled form e^x K(x).

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "lpc/errors.hpp"

namespace lpc {

struct BesselValue {
  double value = 0.0;
  bool underflow = false;  // true when e^-x pushed the result below DBL_MIN
};

namespace detail {

inline constexpr double kBesselCrossover = 2.0;

/// (K0(x), K1(x)) by ascending series, 0 < x <= 2.
inline std::pair<double, double> bessel_k01_series(double x) {
  constexpr double euler = std::numbers::egamma;
  const double y = 0.25 * x * x;
  const double log_half = std::log(0.5 * x);
  // I0, I1 and the digamma-weighted sums.
  double term0 = 1.0;   // y^k / (k!)^2
  double term1 = 1.0;   // y^k / (k! (k+1)!)
  double harmonic = 0.0;  // H_k
  double i0 = 0.0, i1 = 0.0, s0 = 0.0, s1 = 0.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      term0 *= y / (static_cast<double>(k) * k);
      term1 *= y / (static_cast<double>(k) * (k + 1));
      harmonic += 1.0 / k;
    }
    const double harmonic_next = harmonic + 1.0 / (k + 1);
    i0 += term0;
    i1 += term1;
    s0 += term0 * harmonic;
    // psi(k+1) + psi(k+2) = H_k + H_{k+1} - 2 gamma
    s1 += term1 * (harmonic + harmonic_next - 2.0 * euler);
    if (term0 < 1e-18 * i0 && term1 < 1e-18 * i1) break;
  }
  i1 *= 0.5 * x;
  const double k0 = -(log_half + euler) * i0 + s0;
  const double k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1;
  return {k0, k1};
}

/// (e^x K0(x), e^x K1(x)) by Steed's CF2, x > 0 (accurate for x >= 2).
inline std::pair<double, double> bessel_k01_cf2_scaled(double x) {
  constexpr double eps = 1e-17;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;  // 1/4 - mu^2 with mu = 0
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 1;
  for (; i < 100000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps) break;
  }
  if (i >= 100000) throw NumericError("bessel_k: continued fraction did not converge");
  h *= a1;
  const double k0s = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  const double k1s = k0s * (x + 0.5 - h) / x;
  return {k0s, k1s};
}

inline void check_argument(double x, const char* who) {
  if (!(x > 0.0) || std::isnan(x)) {
    throw DomainError(std::string(who) + ": argument must be positive");
  }
}

inline BesselValue unscale(double scaled, double x) {
  // scaled * e^-x, split so the intermediate cannot underflow early.
  const double half = std::exp(-0.5 * x);
  const double v = scaled * half * half;
  return {v, v < std::numeric_limits<double>::min()};
}

}  // namespace detail

/// e^x K1(x).
inline double bessel_k1_scaled(double x) {
  detail::check_argument(x, "bessel_k1");
  if (x <= detail::kBesselCrossover) return detail::bessel_k01_series(x).second * std::exp(x);
  return detail::bessel_k01_cf2_scaled(x).second;
}

/// e^x K0(x).
inline double bessel_k0_scaled(double x) {
  detail::check_argument(x, "bessel_k0");
  if (x <= detail::kBesselCrossover) return detail::bessel_k01_series(x).first * std::exp(x);
  return detail::bessel_k01_cf2_scaled(x).first;
}

inline BesselValue bessel_k1_checked(double x) {
  detail::check_argument(x, "bessel_k1");
  if (x <= detail::kBesselCrossover) return {detail::bessel_k01_series(x).second, false};
  return detail::unscale(detail::bessel_k01_cf2_scaled(x).second, x);
}

inline BesselValue bessel_k0_checked(double x) {
  detail::check_argument(x, "bessel_k0");
  if (x <= detail::kBesselCrossover) return {detail::bessel_k01_series(x).first, false};
  return detail::unscale(detail::bessel_k01_cf2_scaled(x).first, x);
}

/// K1(x) for x > 0. Returns 0 (or a subnormal) past the exponent range; use
/// bessel_k1_checked to see the underflow flag.
inline double bessel_k1(double x) { return bessel_k1_checked(x).value; }

inline double bessel_k0(double x) { return bessel_k0_checked(x).value; }

}  // namespace lpc
