#include <gtest/gtest.h>

#include "rpm/stationary.hpp"
#include "rpm/tq_derivatives.hpp"

using namespace rpm;
using namespace rpm::tq;

TEST(LinearFormAlgebra, EliminationRatio) {
  LinearForm a, b;
  a.add_unknown("dQ(-1)", QField(2));
  a.add_unknown("dP(-1)", qq());
  b.add_unknown("dQ(-1)", QField(-2));
  b.add_unknown("dP(-1)", -qq());
  EXPECT_EQ(elimination_ratio(a, b), QField(-1));
  b.add_unknown("dP(-1)", QField(1));
  EXPECT_THROW(elimination_ratio(a, b), VerificationError);
  LinearForm empty;
  EXPECT_THROW(elimination_ratio(a, empty), VerificationError);
  a.add_unknown("dQ(-1)", QField(-2));
  EXPECT_EQ(a.unknown.count("dQ(-1)"), 0u);  // cancelled terms are dropped
}

TEST(Lambdas, SpotValues) {
  EXPECT_EQ(lambda_alpha(1), make_rational(1, 2));
  EXPECT_EQ(lambda_beta(1), Rational(1));
  EXPECT_EQ(lambda_alpha(2), make_rational(1, 5));
  EXPECT_EQ(lambda_beta(2), make_rational(12, 5));
  EXPECT_EQ(lambda_alpha(3), make_rational(9, 70));
  EXPECT_EQ(lambda_beta(3), make_rational(129, 35));
}

class PerN : public ::testing::TestWithParam<long> {};

TEST_P(PerN, WorksheetAndClosedForms) {
  const long n = GetParam();
  const Report r = verify_lambdas(n);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << "N=" << n << " " << c.name << " " << c.detail;
}

INSTANTIATE_TEST_SUITE_P(UpToTwenty, PerN, ::testing::Range(1L, 21L));

// Two independent routes: T-Q derivatives at N and the exact stationary drifts at L = 2N.
TEST(Lambdas, AgreeWithStationaryDrifts) {
  for (long n = 1; n <= 5; ++n) {
    const auto rep = exact::stationary_report(2 * n);
    EXPECT_EQ(lambda_alpha(n), rep.drifts.global) << n;
    EXPECT_EQ(lambda_beta(n), rep.drifts.diamond) << n;
  }
}
