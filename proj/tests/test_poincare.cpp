#include <gtest/gtest.h>

#include <cmath>

#include "lpc/poincare.hpp"

using namespace lpc;

namespace {

const LatticeCensus& census8() {
  static const LatticeCensus c = enumerate_pruned(8.0);
  return c;
}

PoincareParams default_params() {
  PoincareParams p;
  p.model = fit_counting_model(census8());
  return p;
}

}  // namespace

TEST(CountingModel, FitOnGaussianLattice) {
  const auto m = fit_counting_model(census8());
  EXPECT_NEAR(m.sigma_o, 4.14, 0.05);
  EXPECT_DOUBLE_EQ(m.eps, 0.1);
  EXPECT_DOUBLE_EQ(m.safety, 4.0);
  EXPECT_NEAR(m.required_abscissa(), m.sigma_o + m.eps + 1.0, 1e-15);
  // The safety-scaled model bounds every observed count in the fit range.
  for (double t = 2.0; t <= 8.0; t += 0.05) {
    EXPECT_LE(static_cast<double>(count_within(census8(), t)), m.bound(t)) << t;
  }
}

TEST(CountingModel, FixedExponentAndErrors) {
  const auto m = fit_counting_model(census8(), 0.2, 2.0, 4.5);
  EXPECT_DOUBLE_EQ(m.sigma_o, 4.5);
  EXPECT_DOUBLE_EQ(m.exponent(), 4.7);
  EXPECT_THROW(fit_counting_model(enumerate_pruned(4.0)), CoverageError);
  EXPECT_THROW(fit_counting_model(census8(), -1.0), DomainError);
  EXPECT_THROW(fit_counting_model(census8(), 0.1, 0.5), DomainError);
}

TEST(CountWithin, MatchesRestriction) {
  for (double t : {1.0, 2.0, 3.7, 8.0}) {
    EXPECT_EQ(count_within(census8(), t), restrict_census(census8(), t).size());
  }
}

TEST(Poincare, EmptyCensus) {
  LatticeCensus empty;
  empty.cutoff = 0.0;
  const auto e = poincare_eval(7.0, GroupElement::identity(), empty, default_params());
  EXPECT_EQ(e.value, Complex(0.0));
  EXPECT_GT(e.tail_bound, 0.0);
  EXPECT_TRUE(e.partial_sums.empty());
}

TEST(Poincare, GammaCapKShell) {
  auto p = default_params();
  p.c_g = 2.5;
  const Complex z{7.0, 1.0};
  const auto e = poincare_eval(z, GroupElement::identity(), enumerate_pruned(1.0), p);
  EXPECT_NEAR(std::abs(e.value - 8.0 * p.c_g / z), 0.0, 1e-15);
  ASSERT_EQ(e.partial_sums.size(), 1u);
  EXPECT_EQ(e.partial_sums[0].cumulative, e.value);
  EXPECT_EQ(e.partial_sums[0].count, 8u);
}

TEST(Poincare, DoublingCutoffStaysWithinTail) {
  const auto p = default_params();
  for (Complex z : {Complex(6.0, 0.0), Complex(6.5, 3.0), Complex(8.0, -2.0)}) {
    const auto e4 = poincare_eval(z, GroupElement::identity(), restrict_census(census8(), 4.0), p);
    const auto e8 = poincare_eval(z, GroupElement::identity(), census8(), p);
    EXPECT_LE(std::abs(e8.value - e4.value), e4.tail_bound);
    EXPECT_LT(e8.tail_bound, e4.tail_bound);
  }
}

TEST(Poincare, TailBoundsObservedDifferencesOverManyPairs) {
  const auto p = default_params();
  const Complex z{5.5, 0.0};
  for (double c1 : {2.0, 3.0, 4.0, 5.0, 6.0}) {
    const auto e1 = poincare_eval(z, GroupElement::identity(), restrict_census(census8(), c1), p);
    const auto e2 = poincare_eval(z, GroupElement::identity(), census8(), p);
    EXPECT_LE(std::abs(e2.value - e1.value), e1.tail_bound) << c1;
  }
}

TEST(Poincare, RealZGivesRealPartialSums) {
  const auto p = default_params();
  GroupElement g(Complex(1.0, 0.5), Complex(0.3, 0.0), Complex(0.0, 0.0), 1.0 / Complex(1.0, 0.5));
  const auto e = poincare_eval(6.0, g, census8(), p);
  for (const auto& s : e.partial_sums) {
    EXPECT_LE(std::abs(s.cumulative.imag()), 1e-12 * std::max(1.0, std::abs(s.cumulative)));
  }
}

TEST(Poincare, PartialSumsMonotoneAndBitExactTotal) {
  const auto p = default_params();
  const auto e = poincare_eval(Complex(6.0, 2.0), GroupElement::identity(), census8(), p);
  ASSERT_FALSE(e.partial_sums.empty());
  EXPECT_EQ(e.partial_sums.back().cumulative, e.value);
  for (std::size_t i = 1; i < e.partial_sums.size(); ++i) {
    EXPECT_GE(e.partial_sums[i].cumulative_abs, e.partial_sums[i - 1].cumulative_abs);
    EXPECT_GT(e.partial_sums[i].radius, e.partial_sums[i - 1].radius);
  }
}

TEST(Poincare, ThreadCountInvariant) {
  auto p = default_params();
  GroupElement g(Complex(2.0, 0.0), Complex(0.0, 1.0), Complex(0.0, 0.0), Complex(0.5, 0.0));
  const auto a = poincare_eval(Complex(6.0, 1.0), g, census8(), p);
  p.threads = 4;
  const auto b = poincare_eval(Complex(6.0, 1.0), g, census8(), p);
  EXPECT_EQ(a.value, b.value);
  ASSERT_EQ(a.partial_sums.size(), b.partial_sums.size());
  for (std::size_t i = 0; i < a.partial_sums.size(); ++i) {
    EXPECT_EQ(a.partial_sums[i].cumulative, b.partial_sums[i].cumulative);
  }
}

TEST(Poincare, ShellTableAgreesWithEval) {
  const auto p = default_params();
  const auto table = ShellTable::from_census(census8(), p.roots);
  const Complex z{6.0, 4.0};
  const auto e = poincare_eval(z, GroupElement::identity(), census8(), p);
  EXPECT_NEAR(std::abs(table.poincare(z, 1.0) - e.value), 0.0, 1e-14 * std::abs(e.value));
}

TEST(Poincare, Errors) {
  const auto p = default_params();
  try {
    poincare_eval(3.0, GroupElement::identity(), census8(), p);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("required abscissa"), std::string::npos);
  }
  EXPECT_THROW(poincare_eval(0.0, GroupElement::identity(), census8(), p), ComputationError);
  LatticeCensus bad = enumerate_pruned(2.0);
  bad.cutoff = 1.5;
  EXPECT_THROW(poincare_eval(7.0, GroupElement::identity(), bad, p), InputError);
  LatticeCensus unsorted = enumerate_pruned(2.0);
  std::swap(unsorted.points.front(), unsorted.points.back());
  EXPECT_THROW(poincare_eval(7.0, GroupElement::identity(), unsorted, p), InputError);
  auto even = p;
  even.roots = RootSystemData::make(2, {{1.0, 0.0}}, {1});
  EXPECT_THROW(poincare_eval(7.0, GroupElement::identity(), census8(), even), DomainError);
}

TEST(Poincare, AbscissaForTail) {
  const auto m = fit_counting_model(census8());
  const double s = abscissa_for_tail(1e-8, 8.0, m, 1.0);
  EXPECT_LE(poincare_tail_bound(s, 1.0, 8.0, m, 1.0), 1e-8);
  EXPECT_GT(poincare_tail_bound(s - 2e-3, 1.0, 8.0, m, 1.0), 1e-8);
  EXPECT_THROW(abscissa_for_tail(0.0, 8.0, m, 1.0), DomainError);
}
