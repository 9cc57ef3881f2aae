#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lpc/bessel.hpp"
#include "lpc/freespace.hpp"
#include "oracles.hpp"

using namespace lpc;

TEST(Bessel, PointValues) {
  EXPECT_NEAR(bessel_k1(1.0), 0.6019072302, 1e-10);
  EXPECT_NEAR(bessel_k1(10.0) / 1.864877345e-5, 1.0, 1e-9);
  EXPECT_NEAR(bessel_k1(1.0), oracle::k1_scaled_trapezoid(1.0) * std::exp(-1.0), 1e-15);
}

TEST(Bessel, SmallArgumentLimit) {
  EXPECT_NEAR(1e-6 * bessel_k1(1e-6), 1.0, 1e-8);
}

TEST(Bessel, LargeArgumentAgainstAsymptoticSeries) {
  for (double x : {30.0, 50.0, 100.0, 400.0}) {
    const double ratio = bessel_k1_scaled(x) * std::sqrt(2.0 * x / std::numbers::pi);
    EXPECT_NEAR(ratio, oracle::k1_asymptotic_ratio(x), 1e-12) << x;
  }
  // The leading term alone is only first-order accurate: at x = 50 the ratio
  // is 1 + 3/(8x) + ..., about 7.5e-3 above the limit.
  const double r50 = bessel_k1_scaled(50.0) * std::sqrt(2.0 * 50.0 / std::numbers::pi);
  EXPECT_NEAR(r50 - 1.0, 3.0 / 400.0, 1e-4);
  EXPECT_NEAR(bessel_k1_scaled(1e8) * std::sqrt(2e8 / std::numbers::pi), 1.0, 1e-8);
}

TEST(Bessel, ContinuousAcrossCrossover) {
  const double below = bessel_k1(2.0);
  const double above = bessel_k1(std::nextafter(2.0, 3.0));
  EXPECT_NEAR(below, above, 1e-15);
  EXPECT_NEAR(bessel_k0(2.0), bessel_k0(std::nextafter(2.0, 3.0)), 1e-15);
}

TEST(Bessel, WronskianLikeRecurrence) {
  // K0' = -K1: centred difference check of the pair.
  for (double x : {0.3, 1.0, 1.9, 2.1, 7.0}) {
    const double h = 1e-5;
    const double dk0 = (bessel_k0(x + h) - bessel_k0(x - h)) / (2 * h);
    EXPECT_NEAR(dk0, -bessel_k1(x), 1e-8 * bessel_k1(x));
  }
}

TEST(Bessel, DomainAndUnderflow) {
  EXPECT_THROW(bessel_k1(0.0), DomainError);
  EXPECT_THROW(bessel_k1(-1.0), DomainError);
  EXPECT_THROW(bessel_k1(std::nan("")), DomainError);
  EXPECT_FALSE(bessel_k1_checked(700.0).underflow);
  const auto v = bessel_k1_checked(800.0);
  EXPECT_TRUE(v.underflow);
  EXPECT_LT(v.value, 1e-300);
  EXPECT_GT(bessel_k1_scaled(800.0), 0.0);
}

TEST(ProductFactor, Examples) {
  const auto roots = RootSystemData::sl2c();
  EXPECT_EQ(product_factor(0.0, roots), 1.0);
  EXPECT_NEAR(product_factor(1.0, roots), 1.0 / std::sinh(1.0), 1e-15);
  EXPECT_NEAR(product_factor(1.0, roots), 0.8509181282, 1e-10);
  EXPECT_NEAR(product_factor(0.5, roots), oracle::root_factor_series(1.0), 1e-12);
  EXPECT_EQ(product_factor(CartanCoordinates::from_vector({-0.7}), roots),
            product_factor(CartanCoordinates::from_vector({0.7}), roots));
}

TEST(ProductFactor, RangeAndSeriesBranch) {
  const auto roots = RootSystemData::sl2c();
  for (double r = 1e-3; r < 30.0; r *= 1.1) {
    const double v = product_factor(r, roots);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
  for (double t : {1e-9, 3e-7, 9.9e-7, 1.01e-6, 1e-4, 0.1}) {
    EXPECT_NEAR(root_factor(t), oracle::root_factor_series(t), 1e-14) << t;
  }
}

TEST(ProductFactor, DimensionMismatch) {
  EXPECT_THROW(product_factor(CartanCoordinates::from_vector({1.0, 2.0}), RootSystemData::sl2c()),
               DomainError);
}

TEST(FreeSpace, UOddExamples) {
  FreeSpaceParams p;
  p.z = {2.0, 0.5};
  p.c_g = 3.0;
  EXPECT_NEAR(std::abs(u_odd(CartanCoordinates::rank_one(0.0), p) - p.c_g / p.z), 0.0, 1e-15);
  for (double r : {0.1, 1.0, 5.0}) {
    const auto H = CartanCoordinates::rank_one(r);
    const Complex lhs = u_odd(H, p) * p.z * std::exp(p.z * r);
    EXPECT_NEAR(std::abs(lhs - p.c_g * product_factor(H, p.roots)), 0.0, 1e-13);
  }
  p.z = 0.0;
  EXPECT_THROW(u_odd(CartanCoordinates::rank_one(1.0), p), PoleError);
}

TEST(FreeSpace, UOddMonotoneInRadius) {
  FreeSpaceParams p;
  p.z = 2.0;
  double prev = std::abs(u_odd(CartanCoordinates::rank_one(0.0), p));
  for (int i = 1; i <= 2000; ++i) {
    const double v = std::abs(u_odd(CartanCoordinates::rank_one(0.01 * i), p));
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(FreeSpace, NoteChangeOfVariables) {
  // With z = 2s - 1 and the rank-one product factor r / sinh r, u_odd at C_G = 1
  // reproduces the basepoint summand of the note exactly.
  const Complex s{3.0, 0.25};
  FreeSpaceParams p;
  p.z = note_parameter_to_z(s);
  EXPECT_EQ(p.z, Complex(5.0, 0.5));
  for (double r : {0.0, 1e-8, 0.5, 2.0, 7.0}) {
    const Complex u = u_odd(CartanCoordinates::rank_one(r), p);
    EXPECT_NEAR(std::abs(u - note_summand(r, s)), 0.0, 1e-15 * std::max(1.0, std::abs(u)));
  }
}

TEST(FreeSpace, UEven) {
  const auto roots = RootSystemData::make(2, {{1.0, 0.0}}, {1});
  FreeSpaceParams p;
  p.roots = roots;
  p.z = 1.0;
  const auto H = CartanCoordinates::from_vector({0.6, 0.8});  // |H| = 1
  const double expect = product_factor(H, roots) * 1.0 * oracle::k1_scaled_trapezoid(1.0) * std::exp(-1.0);
  EXPECT_NEAR(u_even(H, p).real(), expect, 1e-14);
  EXPECT_EQ(u_free(H, p), u_even(H, p));
  const auto Hm = CartanCoordinates::from_vector({-0.6, -0.8});
  EXPECT_NEAR(u_even(Hm, p).real(), u_even(H, p).real(), 1e-15);
  EXPECT_THROW(u_even(CartanCoordinates::from_vector({0.0, 0.0}), p), DomainError);
  p.z = {1.0, 0.5};
  EXPECT_THROW(u_even(H, p), DomainError);
  p.z = -1.0;
  EXPECT_THROW(u_even(H, p), DomainError);
}

TEST(FreeSpace, LambdaDerived) {
  FreeSpaceParams p;
  p.z = {2.0, 1.0};
  EXPECT_EQ(p.lambda(), p.z * p.z - 1.0);
}
