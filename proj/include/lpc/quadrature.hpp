#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature over finite intervals, with
// optional pre-splitting into fixed-length panels for long oscillatory ranges.
// Panels are integrated and combined strictly left to right.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <type_traits>

#include "lpc/summation.hpp"

namespace lpc {

struct QuadOptions {
  double abs_tol = 1e-9;  // per panel
  double rel_tol = 0.0;
  double panel_length = 0.0;  // 0: integrate [a, b] as a single panel
  int max_depth = 40;
  std::size_t max_evaluations = 200'000'000;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes at odd indices 1, 3, 5, 7 above.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

/// One GK15 panel. `scale` receives the integral of |f|, which sets the
/// roundoff floor of the error estimate.
template <class F, class T>
void gk15(F& f, double a, double b, T& kronrod, double& err, double& scale) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T k_sum = fc * kKronrodWeights[7];
  T g_sum = fc * kGaussWeights[3];
  double abs_sum = magnitude(fc) * kKronrodWeights[7];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    k_sum += (f1 + f2) * kKronrodWeights[i];
    abs_sum += (magnitude(f1) + magnitude(f2)) * kKronrodWeights[i];
    if (i % 2 == 1) g_sum += (f1 + f2) * kGaussWeights[i / 2];
  }
  kronrod = k_sum * half;
  err = magnitude(T((k_sum - g_sum * 1.0) * half));
  scale = abs_sum * std::abs(half);
}

template <class F, class T>
void adapt(F& f, double a, double b, const QuadOptions& opt, int depth, CompensatedSum<T>& acc,
           double& err_total, std::size_t& evals, bool& converged) {
  T value{};
  double err = 0.0;
  double scale = 0.0;
  gk15(f, a, b, value, err, scale);
  evals += 15;
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * scale;
  const double tol = std::max({opt.abs_tol, opt.rel_tol * magnitude(value), floor});
  if (err <= tol || depth >= opt.max_depth || evals >= opt.max_evaluations) {
    if (err > tol) converged = false;
    acc.add(value);
    err_total += err;
    return;
  }
  const double mid = 0.5 * (a + b);
  adapt(f, a, mid, opt, depth + 1, acc, err_total, evals, converged);
  adapt(f, mid, b, opt, depth + 1, acc, err_total, evals, converged);
}

}  // namespace detail

/// Integrates f over [a, b]. The value type follows f's return type (double
/// or std::complex<double>).
template <class F>
auto integrate(F&& f, double a, double b, const QuadOptions& opt = {})
    -> QuadResult<std::decay_t<std::invoke_result_t<F&, double>>> {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  QuadResult<T> out;
  if (a == b) return out;
  CompensatedSum<T> acc;
  double err = 0.0;
  std::size_t evals = 0;
  bool converged = true;
  std::size_t panels = 1;
  if (opt.panel_length > 0.0) {
    panels = static_cast<std::size_t>(std::ceil(std::abs(b - a) / opt.panel_length));
    panels = std::max<std::size_t>(panels, 1);
  }
  const double step = (b - a) / static_cast<double>(panels);
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = a + step * static_cast<double>(i);
    const double hi = (i + 1 == panels) ? b : a + step * static_cast<double>(i + 1);
    detail::adapt(f, lo, hi, opt, 0, acc, err, evals, converged);
  }
  out.value = acc.value();
  out.error = err;
  out.evaluations = evals;
  out.converged = converged;
  return out;
}

/// Integrates f over [a, inf) through the map t = a + u / (1 - u).
template <class F>
auto integrate_to_infinity(F&& f, double a, const QuadOptions& opt = {}) {
  auto mapped = [&f, a](double u) {
    const double one_minus = 1.0 - u;
    const double t = a + u / one_minus;
    return f(t) * (1.0 / (one_minus * one_minus));
  };
  QuadOptions inner = opt;
  inner.panel_length = 0.0;
  return integrate(mapped, 0.0, 1.0, inner);
}

}  // namespace lpc
