#pragma once

// Flat torus Z^n \ R^n, n = 1, 2, 3: the periodised fundamental solution of
// (Delta - lambda)^nu, Delta = -sum d^2/dx_j^2 and lambda < 0, computed two
// ways.
//
//   geometric: sum_m G_nu(|x + m|),  G_nu the free-space kernel on R^n
//   spectral:  sum_k e^{2 pi i k.x} / (4 pi^2 |k|^2 - lambda)^nu
//
// Both sums are truncated to balls and carry explicit tail bounds.
//
// Kernels, kappa = sqrt(-lambda):
//   n = 1: e^{-kr} / (2k),        e^{-kr} (kr + 1) / (4k^3)
//   n = 2: K0(kr) / (2 pi),       r K1(kr) / (4 pi k)
//   n = 3: e^{-kr} / (4 pi r),    e^{-kr} / (8 pi k)
// and G_{nu+1} = (1/nu) dG_nu / dlambda.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "lpc/bessel.hpp"
#include "lpc/errors.hpp"
#include "lpc/quadrature.hpp"
#include "lpc/summation.hpp"

namespace lpc {

struct TorusParams {
  int n = 1;
  int nu = 1;
  double lambda = -1.0;
  std::vector<double> x{0.0};
  long geom_trunc = 10000;
  long spec_trunc = 10000;
  /// Euler-Maclaurin correction of the spectral tail (n = 1, x on the lattice).
  bool tail_correction = true;

  double kappa() const { return std::sqrt(-lambda); }

  /// Broadcasts a single coordinate to all n.
  static std::vector<double> point(int n, double x) { return std::vector<double>(static_cast<std::size_t>(n), x); }

  void validate() const {
    if (n < 1 || n > 3) throw DomainError("torus: n must be 1, 2 or 3");
    if (nu < 1 || nu > 2) throw DomainError("torus: nu must be 1 or 2");
    if (x.size() != static_cast<std::size_t>(n)) throw InputError("torus: x must have n coordinates");
    for (double v : x) {
      if (!std::isfinite(v)) throw InputError("torus: x must be finite");
    }
    if (!std::isfinite(lambda)) throw DomainError("torus: lambda must be finite");
    if (lambda >= 0.0) {
      const double k2 = lambda / (4.0 * std::numbers::pi * std::numbers::pi);
      if (std::abs(k2 - std::round(k2)) * 4.0 * std::numbers::pi * std::numbers::pi <= 1e-10) {
        throw PoleError("torus: lambda lies on the spectrum {4 pi^2 |k|^2}");
      }
      throw DomainError("torus: lambda must be negative");
    }
    if (geom_trunc < 0 || spec_trunc < 0) throw InputError("torus: truncations must be >= 0");
  }

  bool on_lattice() const {
    return std::all_of(x.begin(), x.end(), [](double v) { return v == std::round(v); });
  }
};

/// Free-space kernel G_nu(r) on R^n.
inline double torus_kernel(int n, int nu, double lambda, double r) {
  const double k = std::sqrt(-lambda);
  constexpr double pi = std::numbers::pi;
  if (n == 1) {
    const double e = std::exp(-k * r);
    return nu == 1 ? e / (2.0 * k) : e * (k * r + 1.0) / (4.0 * k * k * k);
  }
  if (n == 2) {
    if (nu == 1) {
      if (!(r > 0.0)) throw PoleError("torus kernel: K0 is singular at r = 0");
      return bessel_k0(k * r) / (2.0 * pi);
    }
    if (r == 0.0) return 1.0 / (4.0 * pi * k * k);
    return r * bessel_k1(k * r) / (4.0 * pi * k);
  }
  if (n == 3) {
    if (nu == 1) {
      if (!(r > 0.0)) throw PoleError("torus kernel: 1/r is singular at r = 0");
      return std::exp(-k * r) / (4.0 * pi * r);
    }
    return std::exp(-k * r) / (8.0 * pi * k);
  }
  throw DomainError("torus kernel: n must be 1, 2 or 3");
}

/// G_{nu+1}(r) = (1/nu) dG_nu/dlambda by a central difference; cross-check
/// for the closed forms.
inline double torus_kernel_by_derivative(int n, int nu, double lambda, double r, double rel_step = 1e-5) {
  const double h = rel_step * std::abs(lambda);
  return (torus_kernel(n, nu, lambda + h, r) - torus_kernel(n, nu, lambda - h, r)) / (2.0 * h * nu);
}

struct SideResult {
  double value = 0.0;
  double imag = 0.0;
  double tail = 0.0;
  std::size_t terms = 0;
};

namespace detail {

inline double sphere_area(int n) {
  constexpr double pi = std::numbers::pi;
  return n == 1 ? 2.0 : (n == 2 ? 2.0 * pi : 4.0 * pi);
}

/// Bound for sum over shifted lattice points y = x + m, |m| > M, of f(|y|),
/// f positive and decreasing: covering by unit cubes gives
/// omega_n int_{M - 2 sqrt n}^inf f(t) (t + sqrt(n)/2)^{n-1} dt.
template <class F>
double radial_lattice_tail(F&& f, double M, int n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double t0 = M - 2.0 * sn;
  if (!(t0 > 0.0)) {
    throw InputError("torus: truncation " + std::to_string(M) + " below the minimum " +
                     std::to_string(2.0 * sn) + " for a certified tail");
  }
  auto g = [&](double t) { return f(t) * std::pow(t + 0.5 * sn, n - 1); };
  QuadOptions q;
  q.abs_tol = 1e-20;
  q.rel_tol = 1e-10;
  const auto r = integrate_to_infinity(g, t0, q);
  return sphere_area(n) * (r.value + r.error);
}

/// Visits integer vectors with |m|^2 <= M^2 in lexicographic order.
template <class Visit>
void ball_points(int n, long M, Visit&& visit) {
  const long long m2 = static_cast<long long>(M) * M;
  if (n == 1) {
    for (long a = -M; a <= M; ++a) visit(std::vector<long>{a});
  } else if (n == 2) {
    for (long a = -M; a <= M; ++a) {
      const auto rest = static_cast<long>(std::floor(std::sqrt(static_cast<double>(m2 - 1LL * a * a))));
      for (long b = -rest; b <= rest; ++b) {
        if (1LL * a * a + 1LL * b * b <= m2) visit(std::vector<long>{a, b});
      }
    }
  } else {
    for (long a = -M; a <= M; ++a) {
      for (long b = -M; b <= M; ++b) {
        const long long ab = 1LL * a * a + 1LL * b * b;
        if (ab > m2) continue;
        const auto rest = static_cast<long>(std::floor(std::sqrt(static_cast<double>(m2 - ab))));
        for (long c = -rest; c <= rest; ++c) {
          if (ab + 1LL * c * c <= m2) visit(std::vector<long>{a, b, c});
        }
      }
    }
  }
}

}  // namespace detail

inline SideResult torus_geometric_side(const TorusParams& p) {
  p.validate();
  SideResult out;
  CompensatedSum<double> acc;
  detail::ball_points(p.n, p.geom_trunc, [&](const std::vector<long>& m) {
    double r2 = 0.0;
    for (int j = 0; j < p.n; ++j) {
      const double y = p.x[j] + static_cast<double>(m[j]);
      r2 += y * y;
    }
    acc.add(torus_kernel(p.n, p.nu, p.lambda, std::sqrt(r2)));
    ++out.terms;
  });
  out.value = acc.value();
  const double k = p.kappa();
  auto G = [&](double r) { return torus_kernel(p.n, p.nu, p.lambda, r); };
  if (p.n == 1) {
    // Each side is dominated by a geometric series from the first omitted term.
    const double M = static_cast<double>(p.geom_trunc);
    double tail = 0.0;
    for (double t0 : {std::abs(p.x[0] + M + 1.0), std::abs(p.x[0] - M - 1.0)}) {
      double q = std::exp(-k);
      if (p.nu == 2) q *= 1.0 + k / (k * t0 + 1.0);
      if (!(q < 1.0)) throw InputError("torus: geometric truncation too small for a ratio bound");
      tail += G(t0) / (1.0 - q);
    }
    out.tail = tail;
  } else {
    out.tail = detail::radial_lattice_tail(G, static_cast<double>(p.geom_trunc), p.n);
  }
  return out;
}

inline SideResult torus_spectral_side(const TorusParams& p) {
  p.validate();
  constexpr double pi = std::numbers::pi;
  const double a = 4.0 * pi * pi;
  const double b = -p.lambda;
  const bool lattice_x = p.on_lattice();
  if (2 * p.nu <= p.n && lattice_x) {
    throw PoleError("torus: the spectral series diverges at a lattice point when 2 nu <= n");
  }
  SideResult out;
  CompensatedSum<std::complex<double>> acc;
  detail::ball_points(p.n, p.spec_trunc, [&](const std::vector<long>& k) {
    double k2 = 0.0, phase = 0.0;
    for (int j = 0; j < p.n; ++j) {
      k2 += static_cast<double>(k[j]) * static_cast<double>(k[j]);
      phase += static_cast<double>(k[j]) * p.x[j];
    }
    phase -= std::round(phase);
    const double denom = std::pow(a * k2 + b, p.nu);
    acc.add(std::polar(1.0 / denom, 2.0 * pi * phase));
    ++out.terms;
  });
  out.value = acc.value().real();
  out.imag = acc.value().imag();

  const double K = static_cast<double>(p.spec_trunc);
  auto f = [&](double t) { return 1.0 / std::pow(a * t * t + b, p.nu); };
  QuadOptions q;
  q.abs_tol = 1e-22;
  q.rel_tol = 1e-13;
  if (p.n == 1) {
    const auto integral = integrate_to_infinity(f, K, q);
    const double abs_bound = 2.0 * (integral.value + integral.error);
    if (lattice_x) {
      if (p.tail_correction && K >= 1.0) {
        // sum_{k > K} f(k) ~ int_K^inf f - f(K)/2 - f'(K)/12, per side.
        const double fK = f(K);
        const double dfK = -2.0 * p.nu * a * K * std::pow(a * K * K + b, -p.nu - 1);
        out.value += 2.0 * (integral.value - 0.5 * fK - dfK / 12.0);
        const double f3 = 2.0 * p.nu * (2.0 * p.nu + 1) * (2.0 * p.nu + 2) /
                          (std::pow(a, p.nu) * std::pow(K, 2 * p.nu + 3));
        out.tail = 2.0 * 2.0 * f3 / 720.0 + 2.0 * integral.error;
      } else {
        out.tail = abs_bound;
      }
    } else {
      const double s = std::abs(std::sin(pi * p.x[0]));
      out.tail = std::min(abs_bound, 2.0 * f(K + 1.0) / s);
    }
  } else if (2 * p.nu > p.n) {
    out.tail = detail::radial_lattice_tail(f, K, p.n);
  } else {
    // n = 2, nu = 1 off the lattice: Abel summation over rows, each row sum of
    // e^{2 pi i k_j x_j} being bounded by 1 / |sin(pi x_j)|.
    double s = 0.0;
    for (double v : p.x) s = std::max(s, std::abs(std::sin(pi * v)));
    if (p.n != 2) throw DomainError("torus: conditionally convergent case only supported for n = 2");
    const double fk = 1.0 / (a * K * K + b);
    out.tail = (2.0 * K + 1.0) * 2.0 * fk / s + 2.0 * (1.0 + 2.0 / s) / (a * K);
  }
  return out;
}

struct TorusReport {
  TorusParams params;
  double geometric = 0.0;
  double spectral = 0.0;
  double spectral_imag = 0.0;
  double discrepancy = 0.0;
  double geom_tail = 0.0;
  double spec_tail = 0.0;
  double budget = 0.0;
  bool pass = false;
};

inline constexpr double kTorusRoundingFactor = 1e-14;

inline TorusReport torus_identity_check(const TorusParams& p) {
  TorusReport r;
  r.params = p;
  const SideResult g = torus_geometric_side(p);
  const SideResult s = torus_spectral_side(p);
  r.geometric = g.value;
  r.spectral = s.value;
  r.spectral_imag = s.imag;
  r.discrepancy = std::abs(g.value - s.value);
  r.geom_tail = g.tail;
  r.spec_tail = s.tail;
  r.budget = g.tail + s.tail + kTorusRoundingFactor * (std::abs(g.value) + std::abs(s.value));
  r.pass = r.discrepancy <= r.budget;
  return r;
}

}  // namespace lpc
