#pragma once

// Perron smoothing: the kernel obtained from
//
//   (1 / 2 pi i) int_{sigma - iT}^{sigma + iT} e^{sX} / (s (s + theta) ... (s + ell theta)) ds,
//
// the smoothed geometric count over a census, and contour-quadrature oracles.
// Integrands along sigma + iy are conjugate symmetric, so the segment integral
// is (1/pi) int_0^T Re f(sigma + iy) dy.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "lpc/errors.hpp"
#include "lpc/freespace.hpp"
#include "lpc/lattice.hpp"
#include "lpc/poincare.hpp"
#include "lpc/quadrature.hpp"
#include "lpc/summation.hpp"

namespace lpc {

struct SmoothingParams {
  int ell = 2;
  double theta = 1.0;
  double sigma = 2.0;
  double height = 1000.0;

  void validate() const {
    if (ell < 1) throw DomainError("smoothing: ell must be >= 1");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("smoothing: theta must be > 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("smoothing: sigma must be > 0");
    if (!(height > 0.0) || !std::isfinite(height)) throw DomainError("smoothing: height must be > 0");
  }
};

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// (1 - e^{-theta (X - r)})^ell / (ell! theta^ell) for r < X, else 0.
inline double kernel(double X, double r, const SmoothingParams& p) {
  const double u = X - r;
  if (!(u > 0.0)) return 0.0;
  const double base = -std::expm1(-p.theta * u);
  return std::pow(base, p.ell) / (factorial(p.ell) * std::pow(p.theta, p.ell));
}

/// Value of the full-line Perron integral: kernel(X, 0) for X > 0, 0 for X < 0.
inline double perron_closed_form(double X, const SmoothingParams& p) { return kernel(X, 0.0, p); }

/// C_G * sum over census points with r < X of product_factor * kernel.
inline double smoothed_geometric_count(double X, const LatticeCensus& census,
                                       const RootSystemData& roots, const SmoothingParams& p,
                                       double c_g) {
  p.validate();
  if (X > census.covered_radius()) {
    throw CoverageError("smoothed_geometric_count: census covers radius " +
                        std::to_string(census.covered_radius()) + " < X = " + std::to_string(X) +
                        "; need gauge cutoff >= " + std::to_string(gauge_from_radius(X)));
  }
  CompensatedSum<double> acc;
  for (const auto& pt : census.points) {
    if (pt.radius < X) acc.add(product_factor(pt.radius, roots) * kernel(X, pt.radius, p));
  }
  return c_g * acc.value();
}

/// prod_{m = from}^{ell} (s + m theta).
inline Complex pole_product(Complex s, const SmoothingParams& p, int from = 0) {
  Complex out{1.0};
  for (int m = from; m <= p.ell; ++m) out *= s + static_cast<double>(m) * p.theta;
  return out;
}

namespace detail {

inline QuadOptions perron_quad_options(double X, double abs_tol) {
  QuadOptions q;
  q.abs_tol = abs_tol;
  // Half an oscillation period per panel.
  q.panel_length = X != 0.0 ? std::min(std::numbers::pi / std::abs(X), 4.0) : 4.0;
  return q;
}

template <class F>
QuadResult<double> line_integral(F&& re_integrand, double t0, double t1, const QuadOptions& q,
                                 const char* who) {
  QuadResult<double> r = integrate(re_integrand, t0, t1, q);
  if (!r.converged) {
    throw NumericError(std::string(who) + ": quadrature reached only " + std::to_string(r.error) +
                       " against tolerance " + std::to_string(q.abs_tol) + " per panel");
  }
  r.value /= std::numbers::pi;
  r.error /= std::numbers::pi;
  return r;
}

}  // namespace detail

inline constexpr double kPerronAbsTol = 1e-9;

/// Truncated Perron segment integral by adaptive quadrature.
inline QuadResult<double> perron_contour_oracle(double X, const SmoothingParams& p,
                                                double abs_tol = kPerronAbsTol) {
  p.validate();
  if (X == 0.0) throw DomainError("perron_contour_oracle: X = 0 is not covered by the lemma");
  auto f = [&](double y) {
    const Complex s(p.sigma, y);
    return (std::exp(s * X) / pole_product(s, p)).real();
  };
  return detail::line_integral(f, 0.0, p.height, detail::perron_quad_options(X, abs_tol),
                               "perron_contour_oracle");
}

struct PerronScaling {
  double X = 0.0;
  double closed_form = 0.0;
  std::vector<double> heights;
  std::vector<double> values;
  std::vector<double> raw_errors;       // |I(T) - closed|
  std::vector<double> envelope_errors;  // max of |I(T') - closed| over one oscillation period
  std::vector<double> log2_ratios;      // log2(env(T_k) / env(T_{k+1})) normalised by log2(T_{k+1}/T_k)
  double fitted_exponent = 0.0;         // from envelope errors
  double raw_fitted_exponent = 0.0;
  double fitted_constant = 0.0;         // max |err| T^{ell+1} |X| / e^{sigma X}
};

namespace detail {

inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

/// Truncation error study over a list of heights. The raw error oscillates
/// like cos(T X); the envelope error takes the maximum over the following
/// period [T, T + 2 pi / |X|], sampled at `period_samples` points.
inline PerronScaling perron_error_scaling(double X, const SmoothingParams& p,
                                          const std::vector<double>& heights,
                                          double abs_tol = 1e-14, int period_samples = 64) {
  p.validate();
  if (heights.size() < 2) throw InputError("perron_error_scaling: need at least two heights");
  PerronScaling out;
  out.X = X;
  out.closed_form = perron_closed_form(X, p);
  const QuadOptions q = detail::perron_quad_options(X, abs_tol);
  auto f = [&](double y) {
    const Complex s(p.sigma, y);
    return (std::exp(s * X) / pole_product(s, p)).real();
  };
  const double period = 2.0 * std::numbers::pi / std::abs(X);
  for (double T : heights) {
    if (!(T > 0.0)) throw DomainError("perron_error_scaling: heights must be positive");
    SmoothingParams pt = p;
    pt.height = T;
    const double v = perron_contour_oracle(X, pt, abs_tol).value;
    double env = std::abs(v - out.closed_form);
    double running = v;
    const double step = period / period_samples;
    for (int k = 0; k < period_samples; ++k) {
      const double a = T + step * k;
      running += detail::line_integral(f, a, a + step, q, "perron_error_scaling").value;
      env = std::max(env, std::abs(running - out.closed_form));
    }
    out.heights.push_back(T);
    out.values.push_back(v);
    out.raw_errors.push_back(std::abs(v - out.closed_form));
    out.envelope_errors.push_back(env);
    out.fitted_constant = std::max(out.fitted_constant, env * std::pow(T, p.ell + 1) * std::abs(X) /
                                                            std::exp(p.sigma * X));
  }
  std::vector<double> lt, le, lr;
  for (std::size_t i = 0; i < out.heights.size(); ++i) {
    lt.push_back(std::log(out.heights[i]));
    le.push_back(std::log(out.envelope_errors[i]));
    lr.push_back(std::log(std::max(out.raw_errors[i], 1e-300)));
    if (i + 1 < out.heights.size()) {
      out.log2_ratios.push_back(
          std::log2(out.envelope_errors[i] / out.envelope_errors[i + 1]) /
          std::log2(out.heights[i + 1] / out.heights[i]));
    }
  }
  out.fitted_exponent = -detail::ls_slope(lt, le);
  out.raw_fitted_exponent = -detail::ls_slope(lt, lr);
  return out;
}

struct ContourTransform {
  double value = 0.0;
  double quad_error = 0.0;
  double truncation_estimate = 0.0;
};

/// Perron transform of the basepoint Poincare series restricted to a shell
/// table: (1/2 pi i) int Pe_z(x_o) e^{zX} / ((z + theta) ... (z + ell theta)) dz
/// over the truncated line, z = sigma + iy.
inline ContourTransform perron_transform_of_poincare(double X, const ShellTable& shells,
                                                     const SmoothingParams& p, double c_g,
                                                     double abs_tol = 1e-12) {
  p.validate();
  std::vector<double> amp(shells.size()), shift(shells.size());
  ContourTransform out;
  for (std::size_t s = 0; s < shells.size(); ++s) {
    shift[s] = X - shells.radius[s];
    amp[s] = c_g * shells.count[s] * shells.factor[s] * std::exp(p.sigma * shift[s]);
    if (shift[s] != 0.0) {
      out.truncation_estimate +=
          2.0 * amp[s] / (std::numbers::pi * std::abs(shift[s]) * std::pow(p.height, p.ell + 1));
    }
  }
  auto f = [&](double y) {
    const Complex z(p.sigma, y);
    Complex acc{};
    for (std::size_t s = 0; s < amp.size(); ++s) {
      acc += amp[s] * Complex(std::cos(y * shift[s]), std::sin(y * shift[s]));
    }
    return (acc / pole_product(z, p)).real();
  };
  double max_shift = 0.0;
  for (double v : shift) max_shift = std::max(max_shift, std::abs(v));
  QuadOptions q = detail::perron_quad_options(std::max(max_shift, 1e-3), abs_tol);
  const auto r = detail::line_integral(f, 0.0, p.height, q, "perron_transform_of_poincare");
  out.value = r.value;
  out.quad_error = r.error;
  return out;
}

}  // namespace lpc
