#include <gtest/gtest.h>

#include "rpm/bethe.hpp"

using namespace rpm;
using namespace rpm::tq;

TEST(Roots, KnownPolynomial) {
  // (x - 1/2)(x^2 + 1)
  const RationalPolynomial p({make_rational(-1, 2), Rational(1), make_rational(-1, 2), Rational(1)});
  auto roots = polynomial_roots(p);
  ASSERT_EQ(roots.size(), 3u);
  int found = 0;
  for (auto want : {LComplex(0.5L, 0), LComplex(0, 1), LComplex(0, -1)})
    for (const auto& r : roots)
      if (std::abs(r - want) < 1e-15L) ++found;
  EXPECT_EQ(found, 3);
  EXPECT_THROW(polynomial_roots(RationalPolynomial({Rational(3)})), UsageError);
}

TEST(Bethe, SingleRootByHand) {
  // N=1: Q = x - 1/2, so z = u (1/2 - q)/(1 - q/2) and the energy is -3/2.
  const BetheRoots b = bethe_roots(Fsz(1));
  ASSERT_EQ(b.x.size(), 1u);
  EXPECT_NEAR(std::abs(b.x[0] - 0.5L), 0.0, 1e-15);
  const Complex e = xxz_energy_from_z(b);
  EXPECT_NEAR(e.real(), -1.5, 1e-12);
  EXPECT_NEAR(e.imag(), 0.0, 1e-12);
}

class PerN : public ::testing::TestWithParam<long> {};

TEST_P(PerN, EquationsEnergyAndLambda) {
  const long n = GetParam();
  const BetheRoots b = bethe_roots(Fsz(n));
  EXPECT_LT(b.bae_residual, 1e-8);
  EXPECT_LT(b.product_residual, 1e-10);
  EXPECT_GT(b.min_separation, 1e-3);
  const Report r = verify_bethe(Fsz(n));
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << "N=" << n << " " << c.name << " " << c.detail;
}

INSTANTIATE_TEST_SUITE_P(UpToTwenty, PerN, ::testing::Range(1L, 21L));
