#pragma once

// Poincare series Pe_z(g) = sum over gamma of u_z(gamma g), evaluated over a
// lattice census with a tail bound for the gammas the census leaves out.
//
// Tail model. The census is assumed to satisfy N(T) <= c T^s for all T >= 1
// (s = sigma_o + eps). With |u_z(h)| <= (C_G / |z|) |h|^{-(Re z - 1)} and
// |gamma| <= |gamma g| |g|, summation by parts over |gamma| > T0 gives
//
//   tail <= (C_G / |z|) |g|^b * b c T0^{s - b} / (b - s),   b = Re z - 1,
//
// finite iff Re z > s + 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lpc/errors.hpp"
#include "lpc/freespace.hpp"
#include "lpc/lattice.hpp"
#include "lpc/summation.hpp"
#include "lpc/symmetric_space.hpp"

namespace lpc {

/// N(T) <= c * T^(sigma_o + eps). `c` already includes the safety factor.
struct CountingModel {
  double c = 1.0;
  double sigma_o = 4.0;
  double eps = 0.1;
  double safety = 4.0;
  double fit_lo = 2.0;
  double fit_hi = 8.0;

  double exponent() const { return sigma_o + eps; }
  double bound(double gauge_value) const { return c * std::pow(gauge_value, exponent()); }
  /// Smallest Re z for which the tail model converges.
  double required_abscissa() const { return exponent() + 1.0; }
};

inline constexpr double kDefaultCountingEps = 0.1;
inline constexpr double kDefaultTailSafety = 4.0;

/// Number of census points with gauge <= t (exact, via the integer norm bound).
inline std::size_t count_within(const LatticeCensus& census, double t) {
  const std::int64_t nmax = detail::frobenius_bound(t);
  std::size_t n = 0;
  for (const auto& p : census.points) {
    if (p.entries.frobenius_sq() <= nmax) ++n;
  }
  return n;
}

/// Fits sigma_o as the least-squares slope of log N(T) against log T on a
/// geometric grid of gauges in [lo, hi] (unless `fixed_sigma_o` is given),
/// then c as the least-squares coefficient of N(T) ~ c T^(sigma_o + eps),
/// times `safety`.
inline CountingModel fit_counting_model(const LatticeCensus& census, double eps = kDefaultCountingEps,
                                        double safety = kDefaultTailSafety,
                                        std::optional<double> fixed_sigma_o = std::nullopt,
                                        double lo = 2.0, double hi = 8.0, int samples = 25) {
  if (!(lo >= 1.0 && hi > lo)) throw DomainError("fit_counting_model: need 1 <= lo < hi");
  if (census.cutoff < hi) {
    throw CoverageError("fit_counting_model: census cutoff " + std::to_string(census.cutoff) +
                        " does not reach the fit range upper end " + std::to_string(hi));
  }
  if (samples < 2) throw DomainError("fit_counting_model: need at least two samples");
  if (!(eps >= 0.0) || !(safety >= 1.0)) throw DomainError("fit_counting_model: need eps >= 0 and safety >= 1");
  std::vector<double> lt, ln, ts, ns;
  for (int k = 0; k < samples; ++k) {
    const double t = lo * std::pow(hi / lo, static_cast<double>(k) / (samples - 1));
    const auto n = static_cast<double>(count_within(census, t));
    if (n <= 0.0) throw InputError("fit_counting_model: empty count inside the fit range");
    ts.push_back(t);
    ns.push_back(n);
    lt.push_back(std::log(t));
    ln.push_back(std::log(n));
  }
  const double m = static_cast<double>(samples);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < samples; ++k) {
    sx += lt[k];
    sy += ln[k];
    sxx += lt[k] * lt[k];
    sxy += lt[k] * ln[k];
  }
  CountingModel out;
  out.sigma_o = fixed_sigma_o.value_or((m * sxy - sx * sy) / (m * sxx - sx * sx));
  out.eps = eps;
  out.safety = safety;
  out.fit_lo = lo;
  out.fit_hi = hi;
  double num = 0, den = 0;
  for (int k = 0; k < samples; ++k) {
    const double f = std::pow(ts[k], out.exponent());
    num += ns[k] * f;
    den += f * f;
  }
  out.c = safety * num / den;
  return out;
}

/// The default model for SL2(Z[i]), fitted on the census of gauge <= 8.
inline CountingModel gaussian_counting_model() {
  return fit_counting_model(enumerate_pruned(8.0));
}

struct ShellSum {
  double radius = 0.0;  // lattice radius of the shell
  std::size_t count = 0;
  Complex cumulative{};
  double cumulative_abs = 0.0;
};

struct SeriesEvaluation {
  Complex z{};
  Complex value{};
  std::vector<ShellSum> partial_sums;
  double tail_bound = 0.0;
  double census_cutoff = 0.0;
  double required_abscissa = 0.0;
  CountingModel model;
  bool cocompact = false;
  std::string lattice_id;
};

struct PoincareParams {
  double c_g = 1.0;
  RootSystemData roots = RootSystemData::sl2c();
  CountingModel model;
  unsigned threads = 1;
};

/// Tail bound for the gammas with gauge above the census cutoff.
inline double poincare_tail_bound(Complex z, double g_gauge, double census_cutoff,
                                  const CountingModel& model, double c_g) {
  const double beta = z.real() - 1.0;
  const double s = model.exponent();
  if (!(beta > s)) {
    throw ConvergenceError("poincare: Re(z) = " + std::to_string(z.real()) +
                           " has no certified tail; required abscissa Re(z) > " +
                           std::to_string(model.required_abscissa()));
  }
  const double pre = c_g / std::abs(z) * std::pow(g_gauge, beta);
  if (census_cutoff < 1.0) {
    // Nothing enumerated: bound the full sum, N(1) <= c included.
    return pre * (model.c + beta * model.c / (beta - s));
  }
  return pre * beta * model.c * std::pow(census_cutoff, s - beta) / (beta - s);
}

/// Smallest real abscissa sigma (on a 1e-3 grid) with tail bound <= target.
inline double abscissa_for_tail(double target, double census_cutoff, const CountingModel& model,
                                double c_g, double g_gauge = 1.0) {
  if (!(target > 0.0)) throw DomainError("abscissa_for_tail: target must be positive");
  if (!(census_cutoff > 1.0)) throw InputError("abscissa_for_tail: census cutoff must exceed 1");
  double lo = model.required_abscissa();
  double hi = lo + 1.0;
  auto tail = [&](double x) { return poincare_tail_bound(Complex(x, 0.0), g_gauge, census_cutoff, model, c_g); };
  while (tail(hi) > target) {
    hi = lo + 2.0 * (hi - lo);
    if (hi > 1e6) throw ConvergenceError("abscissa_for_tail: target unreachable");
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= model.required_abscissa() || tail(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

namespace detail {

/// [begin, end) index ranges of equal lattice radius in a canonical census.
inline std::vector<std::pair<std::size_t, std::size_t>> shell_ranges(const LatticeCensus& census) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto& pts = census.points;
  std::size_t i = 0;
  while (i < pts.size()) {
    std::size_t j = i + 1;
    const auto n = pts[i].entries.frobenius_sq();
    while (j < pts.size() && pts[j].entries.frobenius_sq() == n) ++j;
    out.emplace_back(i, j);
    i = j;
  }
  return out;
}

inline void validate_census(const LatticeCensus& census) {
  if (!std::isfinite(census.cutoff) || census.cutoff < 0.0) {
    throw InputError("poincare: census cutoff must be a finite nonnegative number");
  }
  if (census.cutoff < 1.0 && !census.points.empty()) {
    throw InputError("poincare: census with cutoff below 1 must be empty");
  }
  for (std::size_t i = 0; i < census.points.size(); ++i) {
    if (census.points[i].gauge > census.cutoff * (1.0 + kBoundarySlack)) {
      throw InputError("poincare: census point exceeds the census cutoff");
    }
    if (i > 0 && canonical_less(census.points[i], census.points[i - 1])) {
      throw InputError("poincare: census is not in canonical order");
    }
  }
}

}  // namespace detail

/// Cumulative sums by lattice-radius shell. Shell subtotals may be computed in
/// parallel; the combine is sequential in shell order, so the result does not
/// depend on the thread count.
inline std::vector<ShellSum> shell_partial_sums(Complex z, const GroupElement& g,
                                                const LatticeCensus& census,
                                                const PoincareParams& p) {
  if (!p.roots.odd_rank()) throw DomainError("poincare: only odd-rank groups are supported");
  if (z == Complex(0.0)) throw PoleError("poincare: z = 0 is a pole of u_z");
  detail::validate_census(census);
  const auto ranges = detail::shell_ranges(census);
  const bool at_identity = g == GroupElement::identity();
  std::vector<Complex> sub(ranges.size());
  std::vector<double> sub_abs(ranges.size());
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      CompensatedSum<Complex> acc;
      CompensatedSum<double> acc_abs;
      for (std::size_t i = ranges[s].first; i < ranges[s].second; ++i) {
        const LatticePoint& pt = census.points[i];
        const double r = at_identity ? pt.radius : cartan_radius(pt.element() * g);
        const Complex u = p.c_g * product_factor(r, p.roots) * std::exp(-z * r) / z;
        acc.add(u);
        acc_abs.add(std::abs(u));
      }
      sub[s] = acc.value();
      sub_abs[s] = acc_abs.value();
    }
  };
  const unsigned threads =
      std::max(1u, std::min<unsigned>(p.threads, static_cast<unsigned>(std::max<std::size_t>(ranges.size(), 1))));
  if (threads == 1) {
    work(0, ranges.size());
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(work, ranges.size() * t / threads, ranges.size() * (t + 1) / threads);
    }
    for (auto& th : pool) th.join();
  }
  std::vector<ShellSum> out;
  CompensatedSum<Complex> total;
  CompensatedSum<double> total_abs;
  for (std::size_t s = 0; s < ranges.size(); ++s) {
    total.add(sub[s]);
    total_abs.add(sub_abs[s]);
    out.push_back({census.points[ranges[s].first].radius, ranges[s].second - ranges[s].first,
                   total.value(), total_abs.value()});
  }
  return out;
}

inline SeriesEvaluation poincare_eval(Complex z, const GroupElement& g, const LatticeCensus& census,
                                      const PoincareParams& p) {
  SeriesEvaluation out;
  out.z = z;
  out.census_cutoff = census.cutoff;
  out.model = p.model;
  out.required_abscissa = p.model.required_abscissa();
  out.cocompact = census.cocompact;
  out.lattice_id = census.lattice_id;
  out.tail_bound = poincare_tail_bound(z, gauge(g), census.cutoff, p.model, p.c_g);
  out.partial_sums = shell_partial_sums(z, g, census, p);
  out.value = out.partial_sums.empty() ? Complex{} : out.partial_sums.back().cumulative;
  return out;
}

/// Shell table at the basepoint: lattice radius, multiplicity and the common
/// product factor. Poincare values at any z follow without re-reading the census.
struct ShellTable {
  std::vector<double> radius;
  std::vector<double> count;
  std::vector<double> factor;

  static ShellTable from_census(const LatticeCensus& census, const RootSystemData& roots) {
    ShellTable t;
    for (const auto& [b, e] : detail::shell_ranges(census)) {
      const double r = census.points[b].radius;
      t.radius.push_back(r);
      t.count.push_back(static_cast<double>(e - b));
      t.factor.push_back(product_factor(r, roots));
    }
    return t;
  }

  std::size_t size() const { return radius.size(); }

  /// Pe_z at the basepoint over the tabulated shells.
  Complex poincare(Complex z, double c_g) const {
    CompensatedSum<Complex> acc;
    for (std::size_t s = 0; s < size(); ++s) {
      acc.add(c_g * count[s] * factor[s] * std::exp(-z * radius[s]) / z);
    }
    return acc.value();
  }
};

}  // namespace lpc
