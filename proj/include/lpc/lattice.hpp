#pragma once

// Enumeration of Gamma = SL2(Z[i]) by gauge. Membership is decided in exact
// integer arithmetic; floating point only enters the gauge and radius.
//
// For det g = 1 the singular values satisfy smax^2 + smax^-2 = |g|_F^2, so
// gauge(g) <= T is equivalent to the integer bound |g|_F^2 <= T^2 + T^-2 and
// the radius is acosh(|g|_F^2 / 2).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "lpc/errors.hpp"
#include "lpc/gaussian.hpp"
#include "lpc/symmetric_space.hpp"

namespace lpc {

inline constexpr const char* kGaussianLatticeId = "SL2(Z[i])";
/// Relative slack on the cutoff so that a gauge equal to the cutoff is kept.
inline constexpr double kBoundarySlack = 1e-12;

struct LatticePoint {
  GaussMatrix entries;
  double radius = 0.0;
  double gauge = 1.0;

  GroupElement element() const { return entries.to_group_element(); }

  static LatticePoint from_entries(const GaussMatrix& m) {
    if (m.det() != GaussInt{1, 0}) throw DomainError("LatticePoint: determinant is not 1");
    const double n = static_cast<double>(m.frobenius_sq());
    // smax^2 - 1, stable for n near 2.
    const double excess = 0.5 * ((n - 2.0) + std::sqrt((n - 2.0) * (n + 2.0)));
    return {m, std::log1p(excess), std::sqrt(1.0 + excess)};
  }

  friend bool operator==(const LatticePoint& x, const LatticePoint& y) {
    return x.entries == y.entries && x.radius == y.radius && x.gauge == y.gauge;
  }
};

/// Canonical order: radius, then the entries (re_a, im_a, ..., re_d, im_d).
inline bool canonical_less(const LatticePoint& x, const LatticePoint& y) {
  if (x.radius != y.radius) return x.radius < y.radius;
  return x.entries < y.entries;
}

struct LatticeCensus {
  std::vector<LatticePoint> points;
  double cutoff = 0.0;
  std::string lattice_id = kGaussianLatticeId;
  /// SL2(Z[i]) is a lattice but not a cocompact one; reports carry this flag.
  bool cocompact = false;

  std::size_t size() const { return points.size(); }
  double max_radius() const { return points.empty() ? 0.0 : points.back().radius; }
  /// Largest X for which every gamma with r_gamma < X is present.
  double covered_radius() const { return cutoff >= 1.0 ? radius_from_gauge(cutoff) : 0.0; }
};

struct EnumerationOptions {
  std::uint64_t work_budget = 4'000'000'000ULL;
  unsigned threads = 1;
};

namespace detail {

inline std::int64_t frobenius_bound(double cutoff) {
  const double t2 = cutoff * cutoff;
  return static_cast<std::int64_t>(std::floor((t2 + 1.0 / t2) * (1.0 + kBoundarySlack)));
}

/// All Gaussian integers with norm <= bound, in lexicographic order.
inline std::vector<GaussInt> gaussian_disk(std::int64_t norm_bound) {
  std::vector<GaussInt> out;
  if (norm_bound < 0) return out;
  const auto r = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(norm_bound)))) + 1;
  for (std::int64_t x = -r; x <= r; ++x) {
    for (std::int64_t y = -r; y <= r; ++y) {
      if (x * x + y * y <= norm_bound) out.push_back({x, y});
    }
  }
  return out;
}

inline void finalize(LatticeCensus& census) {
  std::sort(census.points.begin(), census.points.end(), canonical_less);
}

template <class Worker>
std::vector<LatticePoint> run_partitioned(std::size_t n_items, unsigned threads, Worker&& work) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n_items, 1))));
  std::vector<std::vector<LatticePoint>> parts(threads);
  if (threads == 1) {
    work(0, n_items, parts[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = n_items * t / threads;
      const std::size_t hi = n_items * (t + 1) / threads;
      pool.emplace_back([&, lo, hi, t] { work(lo, hi, parts[t]); });
    }
    for (auto& th : pool) th.join();
  }
  std::vector<LatticePoint> merged;
  for (auto& p : parts) merged.insert(merged.end(), p.begin(), p.end());
  return merged;
}

inline void check_cutoff(double cutoff) {
  if (!(cutoff >= 1.0) || !std::isfinite(cutoff)) {
    throw DomainError("enumerate: cutoff must be a finite value >= 1");
  }
}

}  // namespace detail

/// Exhaustive scan over all entry tuples with |entry| <= cutoff, filtered by
/// det = 1 (exact) and then by the floating point gauge. Kept deliberately
/// simple: it is the reference for `enumerate_pruned`.
inline LatticeCensus enumerate_naive(double cutoff, const EnumerationOptions& opt = {}) {
  detail::check_cutoff(cutoff);
  const auto entry_bound =
      static_cast<std::int64_t>(std::floor(cutoff * cutoff * (1.0 + kBoundarySlack)));
  const std::vector<GaussInt> disk = detail::gaussian_disk(entry_bound);
  const double n = static_cast<double>(disk.size());
  if (n * n * n * n > static_cast<double>(opt.work_budget)) {
    throw ResourceError("enumerate_naive: " + std::to_string(n * n * n * n) +
                        " candidate tuples exceed work budget " + std::to_string(opt.work_budget));
  }
  std::vector<std::int32_t> dre, dim;
  for (const auto& z : disk) {
    dre.push_back(static_cast<std::int32_t>(z.re));
    dim.push_back(static_cast<std::int32_t>(z.im));
  }
  const double gauge_limit = cutoff * (1.0 + kBoundarySlack);
  auto work = [&](std::size_t lo, std::size_t hi, std::vector<LatticePoint>& out) {
    const std::size_t m = disk.size();
    for (std::size_t ia = lo; ia < hi; ++ia) {
      const std::int32_t ar = dre[ia], ai = dim[ia];
      for (std::size_t ib = 0; ib < m; ++ib) {
        for (std::size_t ic = 0; ic < m; ++ic) {
          const GaussInt bc = disk[ib] * disk[ic];
          const auto tr = static_cast<std::int32_t>(bc.re + 1);
          const auto ti = static_cast<std::int32_t>(bc.im);
          for (std::size_t id = 0; id < m; ++id) {
            const std::int32_t re = ar * dre[id] - ai * dim[id];
            const std::int32_t im = ar * dim[id] + ai * dre[id];
            if (re == tr && im == ti) {
              const GaussMatrix g{disk[ia], disk[ib], disk[ic], disk[id]};
              if (gauge(g.to_group_element()) <= gauge_limit) {
                out.push_back(LatticePoint::from_entries(g));
              }
            }
          }
        }
      }
    }
  };
  LatticeCensus census;
  census.cutoff = cutoff;
  census.points = detail::run_partitioned(disk.size(), opt.threads, work);
  detail::finalize(census);
  return census;
}

/// Column-first enumeration. For each primitive first column (a, c) a
/// particular completion (b0, d0) comes from the extended Euclidean
/// algorithm; all completions are (b0 + t a, d0 + t c), t in Z[i]. Since
/// min_t |v0 + t w|^2 = 1/|w|^2, the admissible t lie in an explicit disk.
inline LatticeCensus enumerate_pruned(double cutoff, const EnumerationOptions& opt = {}) {
  detail::check_cutoff(cutoff);
  const std::int64_t nmax = detail::frobenius_bound(cutoff);
  // Both columns are nonzero, so each column has |.|^2 <= nmax - 1.
  const std::vector<GaussInt> disk = detail::gaussian_disk(nmax - 1);
  const double est = static_cast<double>(disk.size()) * static_cast<double>(disk.size());
  if (est > static_cast<double>(opt.work_budget)) {
    throw ResourceError("enumerate_pruned: " + std::to_string(est) +
                        " candidate columns exceed work budget " + std::to_string(opt.work_budget));
  }
  auto work = [&](std::size_t lo, std::size_t hi, std::vector<LatticePoint>& out) {
    for (std::size_t ia = lo; ia < hi; ++ia) {
      const GaussInt a = disk[ia];
      for (const GaussInt c : disk) {
        const std::int64_t w2 = a.norm() + c.norm();
        if (w2 == 0 || w2 > nmax - 1) continue;
        const GaussGcd eg = gcd_ext(a, c);
        if (!eg.g.is_unit()) continue;
        // a*x + c*y = u with u a unit: d0 = x/u, b0 = -y/u (1/u = conj(u)).
        const GaussInt uinv = eg.g.conj();
        const GaussInt d0 = eg.x * uinv;
        const GaussInt b0 = -(eg.y * uinv);
        // t* = -(conj(a) b0 + conj(c) d0) / |w|^2.
        const GaussInt proj = a.conj() * b0 + c.conj() * d0;
        const double w2d = static_cast<double>(w2);
        const double tr_c = -static_cast<double>(proj.re) / w2d;
        const double ti_c = -static_cast<double>(proj.im) / w2d;
        const double rad2 = (static_cast<double>(nmax) - w2d - 1.0 / w2d) / w2d;
        if (rad2 < -1e-9) continue;
        const double rad = std::sqrt(std::max(0.0, rad2)) + 1e-9;
        const auto tr_lo = static_cast<std::int64_t>(std::ceil(tr_c - rad));
        const auto tr_hi = static_cast<std::int64_t>(std::floor(tr_c + rad));
        for (std::int64_t tr = tr_lo; tr <= tr_hi; ++tr) {
          const double dy2 = rad * rad - (tr - tr_c) * (tr - tr_c);
          if (dy2 < 0.0) continue;
          const double dy = std::sqrt(dy2);
          const auto ti_lo = static_cast<std::int64_t>(std::ceil(ti_c - dy));
          const auto ti_hi = static_cast<std::int64_t>(std::floor(ti_c + dy));
          for (std::int64_t ti = ti_lo; ti <= ti_hi; ++ti) {
            const GaussInt t{tr, ti};
            const GaussMatrix g{a, b0 + t * a, c, d0 + t * c};
            if (g.frobenius_sq() <= nmax) out.push_back(LatticePoint::from_entries(g));
          }
        }
      }
    }
  };
  LatticeCensus census;
  census.cutoff = cutoff;
  census.points = detail::run_partitioned(disk.size(), opt.threads, work);
  detail::finalize(census);
  return census;
}

/// Sub-census of points with gauge <= cutoff (cutoff no larger than the
/// source census cutoff).
inline LatticeCensus restrict_census(const LatticeCensus& census, double cutoff) {
  if (cutoff > census.cutoff) {
    throw CoverageError("restrict_census: requested cutoff exceeds census cutoff");
  }
  LatticeCensus out;
  out.cutoff = cutoff;
  out.lattice_id = census.lattice_id;
  out.cocompact = census.cocompact;
  const std::int64_t nmax = detail::frobenius_bound(cutoff);
  for (const auto& p : census.points) {
    if (cutoff >= 1.0 && p.entries.frobenius_sq() <= nmax) out.points.push_back(p);
  }
  return out;
}

/// Histogram of radii in bins [k w, (k+1) w) covering [0, covered radius].
inline std::vector<std::size_t> shell_counts(const LatticeCensus& census, double bin_width) {
  if (!(bin_width > 0.0)) throw DomainError("shell_counts: bin width must be positive");
  const double top = std::max(census.covered_radius(), census.max_radius());
  std::vector<std::size_t> bins(static_cast<std::size_t>(std::floor(top / bin_width)) + 1, 0);
  for (const auto& p : census.points) {
    const auto k = static_cast<std::size_t>(std::floor(p.radius / bin_width));
    if (k >= bins.size()) bins.resize(k + 1, 0);
    ++bins[k];
  }
  return bins;
}

}  // namespace lpc
