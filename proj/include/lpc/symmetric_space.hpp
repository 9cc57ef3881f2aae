#pragma once

// Rank-one matrix model of G = SL2(C) acting on G/K (hyperbolic 3-space):
// unimodular 2x2 complex matrices, root data, Cartan decomposition and the
// operator-norm gauge.
//
// Radius convention: g = k * diag(e^{r/2}, e^{-r/2}) * k2 with r >= 0, so r is
// the geodesic distance from the basepoint to g.x_o and gauge(g) = e^{r/2}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lpc/errors.hpp"

namespace lpc {

using Complex = std::complex<double>;

/// Plain 2x2 complex matrix [[a, b], [c, d]].
struct Mat2 {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static Mat2 identity() { return {}; }
  static Mat2 diagonal(Complex x, Complex y) { return {x, 0.0, 0.0, y}; }

  Complex det() const { return a * d - b * c; }
  double frobenius_sq() const { return std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d); }
  Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }
  /// Scale of the terms entering det(); used for relative tolerances.
  double det_scale() const { return std::abs(a) * std::abs(d) + std::abs(b) * std::abs(c); }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline double max_entry_distance(const Mat2& x, const Mat2& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c),
                   std::abs(x.d - y.d)});
}

inline constexpr double kUnimodularTolerance = 1e-12;

/// Element of SL2(C). The determinant is checked on construction relative to
/// the size of the products that form it.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(const Mat2& m) : m_(m) {
    const double tol = kUnimodularTolerance * std::max(1.0, m.det_scale());
    if (!(std::abs(m.det() - Complex(1.0)) <= tol)) {
      throw DomainError("GroupElement: determinant " + std::to_string(std::abs(m.det())) +
                        " is not 1 within tolerance");
    }
  }
  GroupElement(Complex a, Complex b, Complex c, Complex d) : GroupElement(Mat2{a, b, c, d}) {}

  static GroupElement identity() { return GroupElement(); }

  const Mat2& matrix() const { return m_; }
  Complex a() const { return m_.a; }
  Complex b() const { return m_.b; }
  Complex c() const { return m_.c; }
  Complex d() const { return m_.d; }

  /// Adjugate, exact for unit determinant.
  GroupElement inverse() const {
    GroupElement out;
    out.m_ = Mat2{m_.d, -m_.b, -m_.c, m_.a};
    return out;
  }

  friend GroupElement operator*(const GroupElement& x, const GroupElement& y) {
    return GroupElement(x.m_ * y.m_);
  }
  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  Mat2 m_{};
};

struct SingularValues {
  double max = 1.0;
  double min = 1.0;
};

/// Closed-form singular values of a 2x2 complex matrix from the invariants
/// |m|_F^2 and |det m|.
inline SingularValues singular_values(const Mat2& m) {
  const double f = m.frobenius_sq();
  const double det_abs = std::abs(m.det());
  const double disc = std::sqrt(std::max(0.0, (f - 2.0 * det_abs) * (f + 2.0 * det_abs)));
  const double smax = std::sqrt(0.5 * (f + disc));
  const double smin = smax > 0.0 ? det_abs / smax : 0.0;
  return {smax, smin};
}

inline double operator_norm(const Mat2& m) { return singular_values(m).max; }

/// max(|g|_op, |g^-1|_op). Singular matrices are rejected.
inline double gauge(const Mat2& m) {
  const SingularValues s = singular_values(m);
  if (!(s.min > 0.0) || !std::isfinite(s.max)) {
    throw DomainError("gauge: matrix is singular");
  }
  return std::max(s.max, 1.0 / s.min);
}

/// For unit determinant |g^-1|_op = |g|_op, so only the well-conditioned
/// largest singular value is needed.
inline double gauge(const GroupElement& g) {
  const double f = g.matrix().frobenius_sq();
  const double disc = std::sqrt(std::max(0.0, (f - 2.0) * (f + 2.0)));
  return std::max(1.0, std::sqrt(0.5 * (f + disc)));
}

/// Cartan radius r = log(smax / smin), computed without cancellation near 0.
inline double cartan_radius(const Mat2& m) {
  const double f = m.frobenius_sq();
  const double det_abs = std::abs(m.det());
  if (!(det_abs > 0.0)) throw DomainError("cartan_radius: matrix is singular");
  const double excess = std::max(0.0, f - 2.0 * det_abs);
  const double disc = std::sqrt(excess * (f + 2.0 * det_abs));
  return std::log1p((excess + disc) / (2.0 * det_abs));
}

/// Unit-determinant form: r = acosh(|g|_F^2 / 2). Avoids ad - bc, which
/// cancels badly once the entries are large.
inline double cartan_radius(const GroupElement& g) {
  const double f = g.matrix().frobenius_sq();
  const double excess = std::max(0.0, f - 2.0);
  return std::log1p(0.5 * (excess + std::sqrt(excess * (f + 2.0))));
}

inline double radius_from_gauge(double gauge_value) {
  if (!(gauge_value >= 1.0)) throw DomainError("radius_from_gauge: gauge must be >= 1");
  return 2.0 * std::log(gauge_value);
}

inline double gauge_from_radius(double radius) { return std::exp(0.5 * radius); }

/// exp(H) for the matrix model: diag(e^{r/2}, e^{-r/2}).
inline GroupElement torus_element(double radius) {
  return GroupElement(Mat2::diagonal(std::exp(0.5 * radius), std::exp(-0.5 * radius)));
}

/// Root data of a complex group: rank n, positive roots on a = R^n with
/// multiplicities, rho = (1/2) sum m_alpha alpha, d = number of positive roots
/// and the power nu of the operator whose fundamental solution is closed form.
///
/// `rho_norm` is the |rho| read by all spectral formulas. It defaults to the
/// Euclidean norm of `rho` but a group instance may fix it to match the
/// metric normalisation of its Cartan radius (see `sl2c`).
struct RootSystemData {
  int rank = 1;
  std::vector<std::vector<double>> positive_roots;
  std::vector<int> multiplicities;
  std::vector<double> rho;
  int d = 0;
  int nu = 0;
  double rho_norm = 0.0;

  static RootSystemData make(int rank, std::vector<std::vector<double>> roots,
                             std::vector<int> multiplicities,
                             std::optional<double> rho_norm = std::nullopt) {
    if (rank < 1) throw DomainError("RootSystemData: rank must be positive");
    if (roots.size() != multiplicities.size()) {
      throw DomainError("RootSystemData: one multiplicity per positive root required");
    }
    RootSystemData out;
    out.rank = rank;
    out.rho.assign(static_cast<std::size_t>(rank), 0.0);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (roots[i].size() != static_cast<std::size_t>(rank)) {
        throw DomainError("RootSystemData: root length differs from rank");
      }
      if (multiplicities[i] < 1) throw DomainError("RootSystemData: multiplicity must be >= 1");
      for (int j = 0; j < rank; ++j) {
        out.rho[j] += 0.5 * multiplicities[i] * roots[i][j];
      }
    }
    out.positive_roots = std::move(roots);
    out.multiplicities = std::move(multiplicities);
    out.d = static_cast<int>(out.positive_roots.size());
    out.nu = (rank % 2 == 1) ? (rank + 1) / 2 + out.d : rank / 2 + out.d + 1;
    const double euclid =
        std::sqrt(std::inner_product(out.rho.begin(), out.rho.end(), out.rho.begin(), 0.0));
    out.rho_norm = rho_norm.value_or(euclid);
    if (!(out.rho_norm >= 0.0)) throw DomainError("RootSystemData: |rho| must be >= 0");
    return out;
  }

  /// SL2(C): a single positive root alpha(H) = 2r (multiplicity 2), so the
  /// root product reduces to r / sinh r. With r the geodesic distance on
  /// hyperbolic 3-space, the constant function sits at z = 1, hence the
  /// default |rho| = 1.
  static RootSystemData sl2c(double rho_norm = 1.0) {
    return make(1, {{2.0}}, {2}, rho_norm);
  }

  bool odd_rank() const { return rank % 2 == 1; }
};

/// Point of the closed positive chamber of a; `radius` is the l2 norm of H.
struct CartanCoordinates {
  std::vector<double> H;
  double radius = 0.0;

  static CartanCoordinates from_vector(std::vector<double> h) {
    CartanCoordinates out;
    out.radius = std::sqrt(std::inner_product(h.begin(), h.end(), h.begin(), 0.0));
    out.H = std::move(h);
    return out;
  }
  static CartanCoordinates rank_one(double r) { return from_vector({r}); }
};

struct CartanDecomposition {
  GroupElement k;
  CartanCoordinates H;
  GroupElement k2;
};

namespace detail {

inline Mat2 unitary_from_column(Complex x, Complex y) {
  // [[x, -conj(y)], [y, conj(x)]] has determinant |x|^2 + |y|^2 = 1.
  return Mat2{x, -std::conj(y), y, std::conj(x)};
}

}  // namespace detail

/// g = k * exp(H) * k2 with k, k2 in SU(2) and exp(H) = diag(e^{r/2}, e^{-r/2}).
/// Closed-form singular value factorisation; when the two singular values
/// coincide the factorisation is pinned to k = g, H = 0, k2 = 1.
inline CartanDecomposition cartan_decompose(const GroupElement& g) {
  const Mat2& m = g.matrix();
  const double r = cartan_radius(g);
  if (!std::isfinite(r)) throw NumericError("cartan_decompose: non-finite radius");
  if (r < 1e-13) {
    return {g, CartanCoordinates::rank_one(0.0), GroupElement::identity()};
  }
  // Eigenvector of A = g^H g for the larger eigenvalue mu = smax^2.
  const double p = std::norm(m.a) + std::norm(m.c);
  const double s = std::norm(m.b) + std::norm(m.d);
  const Complex q = std::conj(m.a) * m.b + std::conj(m.c) * m.d;
  const double f = p + s;
  const double disc = std::sqrt(std::max(0.0, (f - 2.0) * (f + 2.0)));
  const double mu = 0.5 * (f + disc);
  Complex v0 = q;
  Complex v1 = mu - p;
  Complex w0 = mu - s;
  Complex w1 = std::conj(q);
  if (std::norm(w0) + std::norm(w1) > std::norm(v0) + std::norm(v1)) {
    v0 = w0;
    v1 = w1;
  }
  const double vn = std::sqrt(std::norm(v0) + std::norm(v1));
  if (!(vn > 0.0) || !std::isfinite(vn)) {
    throw NumericError("cartan_decompose: singular vector did not resolve");
  }
  v0 /= vn;
  v1 /= vn;
  // u1 = g v1 / |g v1|.
  Complex u0 = m.a * v0 + m.b * v1;
  Complex u1 = m.c * v0 + m.d * v1;
  const double un = std::sqrt(std::norm(u0) + std::norm(u1));
  if (!(un > 0.0) || !std::isfinite(un)) {
    throw NumericError("cartan_decompose: left singular vector did not resolve");
  }
  u0 /= un;
  u1 /= un;
  const Mat2 U = detail::unitary_from_column(u0, u1);
  const Mat2 V = detail::unitary_from_column(v0, v1);
  return {GroupElement(U), CartanCoordinates::rank_one(r), GroupElement(V.adjoint())};
}

}  // namespace lpc
