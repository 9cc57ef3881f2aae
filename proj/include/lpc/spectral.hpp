#pragma once

// Spectral side of the smoothed counting formula. For a datum xi with weight
// w and lambda_xi = z_xi^2 - |rho|^2, the Perron transform of w / (lambda_xi -
// lambda_z)^nu is
//
//   w * ( (-1)^nu (A + B) + Per ),
//
// where A, B are the residues of e^{zX} / ((z - z_xi)^nu (z + z_xi)^nu
// (z + theta) ... (z + ell theta)) at z = +z_xi, -z_xi (each already carrying
// its exponential e^{+-z_xi X}) and Per is the sum over the poles z = -m theta
// written with (z_xi^2 - m^2 theta^2)^nu in the denominator.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lpc/errors.hpp"
#include "lpc/perron.hpp"
#include "lpc/quadrature.hpp"
#include "lpc/summation.hpp"
#include "lpc/symmetric_space.hpp"

namespace lpc {

inline constexpr double kCollisionTolerance = 1e-8;
inline constexpr double kLambdaRoundTrip = 1e-12;

struct SpectralDatum {
  enum class Source { Lambda, Z };

  std::string label;
  double lambda = 0.0;
  Complex z{};
  double weight = 0.0;
  Source source = Source::Lambda;

  /// z on the branch Re z >= 0, Im z >= 0 when Re z = 0.
  static SpectralDatum from_lambda(std::string label, double lambda, double weight, double rho_norm) {
    SpectralDatum d;
    d.label = std::move(label);
    d.lambda = lambda;
    const double q = lambda + rho_norm * rho_norm;
    d.z = q >= 0.0 ? Complex(std::sqrt(q), 0.0) : Complex(0.0, std::sqrt(-q));
    d.weight = weight;
    d.source = Source::Lambda;
    d.validate(rho_norm);
    return d;
  }

  /// Accepts z on either branch and stores the canonical one. lambda must
  /// come out real, so z is real or purely imaginary.
  static SpectralDatum from_z(std::string label, Complex z, double weight, double rho_norm) {
    if (z.real() < 0.0 || (z.real() == 0.0 && z.imag() < 0.0)) z = -z;
    const Complex lam = z * z - rho_norm * rho_norm;
    if (std::abs(lam.imag()) > kLambdaRoundTrip * std::max(1.0, std::abs(lam))) {
      throw InputError("spectrum: datum '" + label + "' has non-real lambda = z^2 - |rho|^2");
    }
    SpectralDatum d;
    d.label = std::move(label);
    d.lambda = lam.real();
    d.z = z;
    d.weight = weight;
    d.source = Source::Z;
    d.validate(rho_norm);
    return d;
  }

  void validate(double rho_norm) const {
    if (label.empty()) throw InputError("spectrum: empty label");
    if (!std::isfinite(lambda) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InputError("spectrum: datum '" + label + "' is not finite");
    }
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
      throw InputError("spectrum: datum '" + label + "' has a negative or non-finite weight");
    }
    if (z.real() < 0.0 || (z.real() == 0.0 && z.imag() < 0.0)) {
      throw InputError("spectrum: datum '" + label + "' violates the z branch");
    }
    const Complex back = z * z - rho_norm * rho_norm;
    if (std::abs(back - Complex(lambda)) > kLambdaRoundTrip * std::max(1.0, std::abs(lambda))) {
      throw InputError("spectrum: datum '" + label + "' fails z^2 - |rho|^2 = lambda");
    }
  }

  bool is_constant_form() const { return lambda == 0.0; }
};

namespace detail {

inline void check_collisions(Complex z_xi, const SmoothingParams& p, const char* who) {
  if (std::abs(z_xi) < kCollisionTolerance) {
    throw DegeneracyError(std::string(who) + ": z_xi = 0 merges the poles at +-z_xi");
  }
  for (int m = 1; m <= p.ell; ++m) {
    const double mt = m * p.theta;
    if (std::abs(z_xi + mt) < kCollisionTolerance || std::abs(z_xi - mt) < kCollisionTolerance) {
      throw DegeneracyError(std::string(who) + ": z_xi collides with the kernel pole m = " +
                            std::to_string(m) + " (|z_xi| = m theta)");
    }
  }
}

/// Residue at z = c of e^{zX} (z - o)^{-nu} / prod_m (z + m theta): the
/// coefficient of h^{nu-1} in the product of the Taylor series of the three
/// factors about c.
inline Complex pole_residue(Complex c, Complex o, double X, const SmoothingParams& p, int nu) {
  const int n = nu;  // series length
  const Complex gap = c - o;
  std::vector<Complex> series(n, Complex{});
  // (gap + h)^{-nu} = gap^{-nu} sum_k binom(-nu, k) (h / gap)^k
  {
    Complex coef = std::pow(gap, -nu);
    for (int k = 0; k < n; ++k) {
      series[k] = coef;
      coef *= static_cast<double>(-nu - k) / (k + 1.0) / gap;
    }
  }
  auto convolve = [n](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> out(n, Complex{});
    for (int i = 0; i < n; ++i) {
      for (int j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  };
  // e^{(c + h) X}
  {
    std::vector<Complex> e(n);
    Complex coef = std::exp(c * X);
    for (int k = 0; k < n; ++k) {
      e[k] = coef;
      coef *= X / (k + 1.0);
    }
    series = convolve(series, e);
  }
  // (c + m theta + h)^{-1} = sum_k (-1)^k h^k / (c + m theta)^{k+1}
  for (int m = 1; m <= p.ell; ++m) {
    const Complex a = c + static_cast<double>(m) * p.theta;
    std::vector<Complex> g(n);
    Complex coef = 1.0 / a;
    for (int k = 0; k < n; ++k) {
      g[k] = coef;
      coef *= -1.0 / a;
    }
    series = convolve(series, g);
  }
  return series[n - 1];
}

inline void check_nu(int nu) {
  if (nu < 1) throw DomainError("spectral: nu must be >= 1");
}

}  // namespace detail

/// Residue at z = z_xi (includes the factor e^{z_xi X}).
inline Complex residue_A(Complex z_xi, double X, const SmoothingParams& p, int nu) {
  p.validate();
  detail::check_nu(nu);
  detail::check_collisions(z_xi, p, "residue_A");
  return detail::pole_residue(z_xi, -z_xi, X, p, nu);
}

/// Residue at z = -z_xi (includes the factor e^{-z_xi X}).
inline Complex residue_B(Complex z_xi, double X, const SmoothingParams& p, int nu) {
  p.validate();
  detail::check_nu(nu);
  detail::check_collisions(z_xi, p, "residue_B");
  return detail::pole_residue(-z_xi, z_xi, X, p, nu);
}

/// (1 / theta^{ell-1}) sum_m (-1)^{m-1} e^{-m theta X} / ((m-1)! (ell-m)! (z_xi^2 - m^2 theta^2)^nu).
inline Complex per_term(Complex z_xi, double X, const SmoothingParams& p, int nu) {
  p.validate();
  detail::check_nu(nu);
  detail::check_collisions(z_xi, p, "per_term");
  if (X < 0.0) throw DomainError("per_term: X must be >= 0");
  CompensatedSum<Complex> acc;
  for (int m = 1; m <= p.ell; ++m) {
    const double mt = m * p.theta;
    const double sign = (m % 2 == 1) ? 1.0 : -1.0;
    acc.add(sign * std::exp(-mt * X) /
            (factorial(m - 1) * factorial(p.ell - m) * std::pow(z_xi * z_xi - mt * mt, nu)));
  }
  return acc.value() / std::pow(p.theta, p.ell - 1);
}

struct DatumTerm {
  std::string label;
  double lambda = 0.0;
  Complex z{};
  double weight = 0.0;
  bool constant_form = false;
  Complex A{}, B{}, Per{};
  double contribution = 0.0;  // weight * ((-1)^nu (A + B) + Per), real part
  double imag_residual = 0.0;
  std::optional<std::string> error;
};

struct SpectralSideReport {
  double X = 0.0;
  int nu = 0;
  int sign = 1;  // (-1)^nu
  double constant_term = 0.0;
  std::vector<DatumTerm> discrete_terms;  // canonical label order, constant form included
  double total = 0.0;         // Perron transform of the spectral expression
  double signed_total = 0.0;  // (-1)^nu * total
  std::string status = "ok";  // ok | constant form missing | partial | empty
  std::size_t failed = 0;
};

/// Labels must be unique; at most one datum may be the constant form.
inline std::vector<SpectralDatum> canonical_spectrum(std::vector<SpectralDatum> spectrum) {
  std::sort(spectrum.begin(), spectrum.end(),
            [](const SpectralDatum& a, const SpectralDatum& b) { return a.label < b.label; });
  for (std::size_t i = 1; i < spectrum.size(); ++i) {
    if (spectrum[i].label == spectrum[i - 1].label) {
      throw InputError("spectrum: duplicate label '" + spectrum[i].label + "'");
    }
  }
  const auto constants = std::count_if(spectrum.begin(), spectrum.end(),
                                       [](const SpectralDatum& d) { return d.is_constant_form(); });
  if (constants > 1) throw InputError("spectrum: more than one constant form (lambda = 0)");
  return spectrum;
}

inline SpectralSideReport spectral_side_eval(const std::vector<SpectralDatum>& spectrum, double X,
                                             const SmoothingParams& p, int nu, double rho_norm) {
  p.validate();
  detail::check_nu(nu);
  const auto data = canonical_spectrum(spectrum);
  SpectralSideReport rep;
  rep.X = X;
  rep.nu = nu;
  rep.sign = (nu % 2 == 0) ? 1 : -1;
  bool has_constant = false;
  CompensatedSum<double> total;
  for (const auto& d : data) {
    d.validate(rho_norm);
    DatumTerm t;
    t.label = d.label;
    t.lambda = d.lambda;
    t.z = d.z;
    t.weight = d.weight;
    t.constant_form = d.is_constant_form();
    has_constant = has_constant || t.constant_form;
    try {
      t.A = residue_A(d.z, X, p, nu);
      t.B = residue_B(d.z, X, p, nu);
      t.Per = per_term(d.z, X, p, nu);
      const Complex c = d.weight * (static_cast<double>(rep.sign) * (t.A + t.B) + t.Per);
      t.contribution = c.real();
      t.imag_residual = c.imag();
      total.add(t.contribution);
      if (t.constant_form) rep.constant_term = t.contribution;
    } catch (const ComputationError& e) {
      t.error = e.what();
      ++rep.failed;
    }
    rep.discrete_terms.push_back(std::move(t));
  }
  rep.total = total.value();
  rep.signed_total = rep.sign * rep.total;
  if (data.empty()) {
    rep.status = "empty";
  } else if (rep.failed > 0) {
    rep.status = "partial";
  } else if (!has_constant) {
    rep.status = "constant form missing";
  }
  return rep;
}

struct ContourResult {
  double value = 0.0;
  double quad_error = 0.0;
  double tail_bound = 0.0;
  double height = 0.0;
};

/// Direct quadrature of the Perron transform of sum_xi w / (lambda_xi - lambda_z)^nu
/// along sigma + iy, y in [-T, T], with T raised until the analytic tail
/// bound is below `tail_target`.
inline ContourResult global_contour_oracle(const std::vector<SpectralDatum>& spectrum, double X,
                                           const SmoothingParams& p, int nu,
                                           double tail_target = 1e-8, double abs_tol = 1e-12) {
  p.validate();
  detail::check_nu(nu);
  ContourResult out;
  double wsum = 0.0;
  double zmax = 0.0;
  for (const auto& d : spectrum) {
    if (!(p.sigma > std::abs(d.z.real()))) {
      throw DomainError("global_contour_oracle: sigma must lie right of every |Re z_xi|");
    }
    wsum += d.weight;
    zmax = std::max(zmax, std::abs(d.z));
  }
  if (wsum == 0.0) return out;
  const int k = 2 * nu + p.ell - 1;
  const double coef = wsum * std::exp(p.sigma * X) * std::pow(4.0 / 3.0, nu) / (std::numbers::pi * k);
  const double t_min = 2.0 * std::max({zmax, p.ell * p.theta, p.sigma});
  const double t_tail = std::pow(coef / tail_target, 1.0 / k);
  out.height = std::max({t_min, t_tail, p.height});
  out.tail_bound = coef / std::pow(out.height, k);
  auto f = [&](double y) {
    const Complex z(p.sigma, y);
    Complex acc{};
    for (const auto& d : spectrum) acc += d.weight / std::pow(d.z * d.z - z * z, nu);
    return (acc * std::exp(z * X) / pole_product(z, p, 1)).real();
  };
  const auto r = detail::line_integral(f, 0.0, out.height,
                                       detail::perron_quad_options(X != 0.0 ? X : 1.0, abs_tol),
                                       "global_contour_oracle");
  out.value = r.value;
  out.quad_error = r.error;
  return out;
}

}  // namespace lpc
