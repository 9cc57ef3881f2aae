#include <gtest/gtest.h>

#include <cmath>

#include "lpc/spectral.hpp"
#include "oracles.hpp"

using namespace lpc;

namespace {

const SmoothingParams kP{2, 1.0, 2.0, 1000.0};

Complex integrand_denominator(Complex z, const SmoothingParams& p) {
  Complex d{1.0};
  for (int m = 1; m <= p.ell; ++m) d *= z + m * p.theta;
  return d;
}

Complex cauchy_A(Complex zx, double X, const SmoothingParams& p, int nu) {
  return oracle::cauchy_circle(
      [&](Complex z) {
        return std::exp(z * X) / (std::pow(z - zx, nu) * std::pow(z + zx, nu) * integrand_denominator(z, p));
      },
      zx, 1e-2);
}

Complex cauchy_B(Complex zx, double X, const SmoothingParams& p, int nu) {
  return oracle::cauchy_circle(
      [&](Complex z) {
        return std::exp(z * X) / (std::pow(z - zx, nu) * std::pow(z + zx, nu) * integrand_denominator(z, p));
      },
      -zx, 1e-2);
}

Complex cauchy_per(Complex zx, double X, const SmoothingParams& p, int nu) {
  Complex acc{};
  for (int m = 1; m <= p.ell; ++m) {
    acc += oracle::cauchy_circle(
        [&](Complex z) {
          return std::exp(z * X) / (std::pow(zx * zx - z * z, nu) * integrand_denominator(z, p));
        },
        -m * p.theta, 1e-2);
  }
  return acc;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Residues, SimplePoleClosedForms) {
  const Complex z{1.3, 0.0};
  const double X = 0.8;
  const Complex a = std::exp(z * X) / (2.0 * z * (z + 1.0) * (z + 2.0));
  const Complex b = std::exp(-z * X) / (-2.0 * z * (-z + 1.0) * (-z + 2.0));
  EXPECT_LT(rel(residue_A(z, X, kP, 1), a), 1e-15);
  EXPECT_LT(rel(residue_B(z, X, kP, 1), b), 1e-15);
}

TEST(Residues, AgreeWithCauchyCircle) {
  for (int nu : {1, 2, 3}) {
    for (Complex z : {Complex(1.0, 0.0), Complex(0.5, 0.0), Complex(0.0, 1.7), Complex(3.2, 0.0)}) {
      SmoothingParams p = kP;
      if (z == Complex(1.0, 0.0)) p.theta = 0.7;
      for (double X : {0.0, 1.0, 2.5}) {
        EXPECT_LT(rel(residue_A(z, X, p, nu), cauchy_A(z, X, p, nu)), 1e-8) << nu << z << X;
        EXPECT_LT(rel(residue_B(z, X, p, nu), cauchy_B(z, X, p, nu)), 1e-8) << nu << z << X;
        EXPECT_LT(std::abs(per_term(z, X, p, nu) - cauchy_per(z, X, p, nu)), 1e-10) << nu << z << X;
      }
    }
  }
}

TEST(Residues, MirrorSymmetry) {
  for (Complex z : {Complex(0.4, 0.0), Complex(0.0, 2.0)}) {
    EXPECT_EQ(residue_B(z, 1.1, kP, 2), residue_A(-z, 1.1, kP, 2));
  }
}

TEST(Residues, PolynomialInX) {
  const Complex z{0.6, 0.0};
  const double h = 0.5;
  for (int nu : {1, 2, 3}) {
    auto pa = [&](double X) { return residue_A(z, X, kP, nu) * std::exp(-z * X); };
    auto pb = [&](double X) { return residue_B(z, X, kP, nu) * std::exp(z * X); };
    for (double X0 : {0.0, 1.0, 3.0}) {
      Complex da{}, db{};
      for (int k = 0; k <= nu; ++k) {
        const double c = std::tgamma(nu + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(nu - k + 1.0)) *
                         ((k % 2) ? -1.0 : 1.0);
        da += c * pa(X0 + k * h);
        db += c * pb(X0 + k * h);
      }
      EXPECT_LT(std::abs(da), 1e-9);
      EXPECT_LT(std::abs(db), 1e-9);
    }
  }
}

TEST(PerTerm, EllOneAndDecay) {
  SmoothingParams p{1, 0.8, 2.0, 100.0};
  const Complex z{1.5, 0.0};
  EXPECT_LT(rel(per_term(z, 2.0, p, 2), std::exp(-0.8 * 2.0) / std::pow(z * z - 0.64, 2)), 1e-15);
  // The m = 2 term pulls the ratio above e^{-theta} by ~eps e^{-theta X}.
  const double eps = std::abs(std::pow((z * z - 1.0) / (z * z - 4.0), 2));
  for (double X = 5.0; X < 40.0; X += 0.5) {
    const double ratio = std::abs(per_term(z, X + 1.0, kP, 2)) / std::abs(per_term(z, X, kP, 2));
    EXPECT_LE(ratio, std::exp(-kP.theta) * (1.0 + 2.0 * eps * std::exp(-kP.theta * X)) + 1e-12);
    EXPECT_GE(ratio, std::exp(-kP.theta) * (1.0 - 1e-12));
    if (X >= 22.0) {
      EXPECT_LE(ratio, std::exp(-kP.theta) + 1e-9);
    }
  }
  EXPECT_THROW(per_term(z, -1.0, kP, 2), DomainError);
}

TEST(Residues, CollisionsAreDegeneracies) {
  try {
    residue_A(2.0, 1.0, kP, 2);
    FAIL();
  } catch (const DegeneracyError& e) {
    EXPECT_NE(std::string(e.what()).find("m = 2"), std::string::npos);
  }
  EXPECT_THROW(residue_B(1.0 + 1e-10, 1.0, kP, 2), DegeneracyError);
  EXPECT_THROW(per_term(0.0, 1.0, kP, 2), DegeneracyError);
  EXPECT_THROW(residue_A(0.5, 1.0, kP, 0), DomainError);
}

TEST(SpectralDatum, BranchAndRoundTrip) {
  const auto a = SpectralDatum::from_lambda("a", 3.0, 1.0, 1.0);
  EXPECT_EQ(a.z, Complex(2.0, 0.0));
  const auto b = SpectralDatum::from_lambda("b", -5.0, 1.0, 1.0);
  EXPECT_EQ(b.z, Complex(0.0, 2.0));
  const auto c = SpectralDatum::from_z("c", Complex(-2.0, 0.0), 1.0, 1.0);
  EXPECT_EQ(c.z, Complex(2.0, 0.0));
  EXPECT_EQ(c.lambda, 3.0);
  const auto d = SpectralDatum::from_z("d", Complex(0.0, -2.0), 1.0, 1.0);
  EXPECT_EQ(d.z, Complex(0.0, 2.0));
  EXPECT_EQ(d.lambda, -5.0);
  EXPECT_THROW(SpectralDatum::from_z("e", Complex(1.0, 1.0), 1.0, 1.0), InputError);
  EXPECT_THROW(SpectralDatum::from_lambda("f", 1.0, -1.0, 1.0), InputError);
  EXPECT_THROW(SpectralDatum::from_lambda("", 1.0, 1.0, 1.0), InputError);
  EXPECT_TRUE(SpectralDatum::from_lambda("g", 0.0, 1.0, 1.0).is_constant_form());
  for (double lam = -40.0; lam < 40.0; lam += 0.37) {
    const auto s = SpectralDatum::from_lambda("x", lam, 1.0, 1.3);
    EXPECT_NEAR(std::abs(s.z * s.z - 1.69 - lam), 0.0, 1e-12 * std::max(1.0, std::abs(lam)));
  }
}

TEST(SpectralSide, EmptyAndStatus) {
  const auto r = spectral_side_eval({}, 1.0, kP, 2, 1.0);
  EXPECT_EQ(r.total, 0.0);
  EXPECT_EQ(r.status, "empty");
  const auto r2 = spectral_side_eval({SpectralDatum::from_lambda("x", 3.0, 1.0, 1.0)}, 1.0,
                                     SmoothingParams{2, 0.7, 3.0, 100.0}, 2, 1.0);
  EXPECT_EQ(r2.status, "constant form missing");
  EXPECT_EQ(r2.sign, 1);
  // theta = 1 puts the constant form (z = 1) on the kernel pole m = 1.
  const auto r3 = spectral_side_eval({SpectralDatum::from_lambda("c", 0.0, 1.0, 1.0)}, 1.0, kP, 2, 1.0);
  EXPECT_EQ(r3.status, "partial");
  EXPECT_EQ(r3.failed, 1u);
  ASSERT_TRUE(r3.discrete_terms.at(0).error.has_value());
}

TEST(SpectralSide, DuplicateLabelsRejected) {
  std::vector<SpectralDatum> s = {SpectralDatum::from_lambda("x", 3.0, 1.0, 1.0),
                                  SpectralDatum::from_lambda("x", 5.0, 1.0, 1.0)};
  EXPECT_THROW(spectral_side_eval(s, 1.0, kP, 2, 1.0), InputError);
  s = {SpectralDatum::from_lambda("x", 0.0, 1.0, 1.0), SpectralDatum::from_lambda("y", 0.0, 1.0, 1.0)};
  EXPECT_THROW(canonical_spectrum(s), InputError);
}

TEST(SpectralSide, ConstantFormMatchesContour) {
  const SmoothingParams p{2, 0.7, 3.0, 100.0};
  const std::vector<SpectralDatum> s = {SpectralDatum::from_lambda("const", 0.0, 2.0, 1.0)};
  for (double X : {0.5, 1.5, 3.0}) {
    const auto r = spectral_side_eval(s, X, p, 2, 1.0);
    EXPECT_EQ(r.status, "ok");
    const auto& t = r.discrete_terms.at(0);
    EXPECT_TRUE(t.constant_form);
    EXPECT_NEAR(r.constant_term, r.total, 0.0);
    EXPECT_NEAR(r.total, 2.0 * (t.A + t.B + t.Per).real(), 1e-15);
    const auto o = global_contour_oracle(s, X, p, 2);
    EXPECT_NEAR(r.total, o.value, 1e-6);
  }
}

TEST(SpectralSide, MixedSpectrumAgainstContour) {
  const SmoothingParams p{3, 0.6, 3.5, 100.0};
  const std::vector<SpectralDatum> s = {
      SpectralDatum::from_lambda("const", 0.0, 1.0, 1.0), SpectralDatum::from_lambda("b", 4.5, 0.3, 1.0),
      SpectralDatum::from_lambda("a", -3.0, 0.7, 1.0), SpectralDatum::from_lambda("c", 11.0, 0.1, 1.0)};
  for (int nu : {1, 2, 3}) {
    for (double X : {0.3, 2.0}) {
      const auto r = spectral_side_eval(s, X, p, nu, 1.0);
      ASSERT_EQ(r.status, "ok");
      EXPECT_EQ(r.discrete_terms.front().label, "a");
      EXPECT_LT(std::abs(r.discrete_terms.front().imag_residual), 1e-12);
      EXPECT_NEAR(r.signed_total, r.sign * r.total, 0.0);
      EXPECT_NEAR(r.total, global_contour_oracle(s, X, p, nu).value, 1e-6) << nu << " " << X;
    }
  }
}

TEST(ContourOracle, LinearityAndZeroWeight) {
  const SmoothingParams p{2, 0.7, 3.0, 100.0};
  auto one = [&](double w) {
    return global_contour_oracle({SpectralDatum::from_lambda("x", 2.0, w, 1.0)}, 1.0, p, 2).value;
  };
  EXPECT_EQ(one(0.0), 0.0);
  EXPECT_NEAR(one(3.0), 3.0 * one(1.0), 1e-10);
  EXPECT_THROW(global_contour_oracle({SpectralDatum::from_lambda("x", 20.0, 1.0, 1.0)}, 1.0, p, 2),
               DomainError);
}
