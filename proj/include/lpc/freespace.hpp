#pragma once

// Free-space fundamental solution u_z of (Delta - lambda_z)^nu on G/K for a
// complex group, in the odd-rank (exponential) and even-rank (K1) forms.
//
// In the SL2(C) instance with r the geodesic radius, u_z at radius r equals
// C_G (r / sinh r) e^{-z r} / z. The basepoint form written with a parameter
// s, namely r e^{-(2s-1) r} / ((2s-1) sinh r), is the same function under
// z = 2s - 1 (see `note_parameter_to_z`).

#include <cmath>
#include <complex>

#include "lpc/bessel.hpp"
#include "lpc/errors.hpp"
#include "lpc/symmetric_space.hpp"

namespace lpc {

struct FreeSpaceParams {
  Complex z{2.0, 0.0};
  double c_g = 1.0;
  RootSystemData roots = RootSystemData::sl2c();

  Complex lambda() const { return z * z - roots.rho_norm * roots.rho_norm; }
};

inline constexpr double kProductFactorThreshold = 1e-6;

/// t / (2 sinh(t/2)), patched near t = 0.
inline double root_factor(double t) {
  if (std::abs(t) < kProductFactorThreshold) return 1.0 - t * t / 24.0;
  return t / (2.0 * std::sinh(0.5 * t));
}

/// prod over positive roots (with one factor per root, as in the formula) of
/// alpha(H) / (2 sinh(alpha(H)/2)).
inline double product_factor(const CartanCoordinates& H, const RootSystemData& roots) {
  if (H.H.size() != static_cast<std::size_t>(roots.rank)) {
    throw DomainError("product_factor: H has the wrong dimension");
  }
  double out = 1.0;
  for (const auto& alpha : roots.positive_roots) {
    double t = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) t += alpha[j] * H.H[j];
    out *= root_factor(t);
  }
  return out;
}

/// Rank-one shortcut: product factor at radius r.
inline double product_factor(double radius, const RootSystemData& roots) {
  return product_factor(CartanCoordinates::rank_one(radius), roots);
}

/// Odd rank: C_G * prod * e^{-z|H|} / z.
inline Complex u_odd(const CartanCoordinates& H, const FreeSpaceParams& p) {
  if (p.z == Complex(0.0)) throw PoleError("u_odd: z = 0 is a pole");
  return p.c_g * product_factor(H, p.roots) * std::exp(-p.z * H.radius) / p.z;
}

/// Even rank: C_G * prod * (|H| / z) * K1(z |H|). Real z > 0 only.
inline Complex u_even(const CartanCoordinates& H, const FreeSpaceParams& p) {
  if (!(p.z.real() > 0.0)) throw DomainError("u_even: Re(z) must be positive");
  if (p.z.imag() != 0.0) throw DomainError("u_even: complex z is not supported by the K1 kernel");
  if (!(H.radius > 0.0)) throw DomainError("u_even: K1 is singular at |H| = 0");
  const double z = p.z.real();
  return p.c_g * product_factor(H, p.roots) * (H.radius / z) * bessel_k1(z * H.radius);
}

/// Parity dispatch on the rank of the root data.
inline Complex u_free(const CartanCoordinates& H, const FreeSpaceParams& p) {
  return p.roots.odd_rank() ? u_odd(H, p) : u_even(H, p);
}

/// z = 2s - 1.
inline Complex note_parameter_to_z(Complex s) { return 2.0 * s - 1.0; }

/// The basepoint summand r e^{-(2s-1) r} / ((2s-1) sinh r), with its limit at r = 0.
inline Complex note_summand(double r, Complex s) {
  const Complex w = 2.0 * s - 1.0;
  const double ratio = std::abs(r) < kProductFactorThreshold ? 1.0 - r * r / 6.0 : r / std::sinh(r);
  return ratio * std::exp(-w * r) / w;
}

}  // namespace lpc
