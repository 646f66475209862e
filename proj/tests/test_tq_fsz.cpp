#include <gtest/gtest.h>

#include <random>

#include "rpm/tq_fsz.hpp"

using namespace rpm;
using namespace rpm::tq;

namespace {
RationalPolynomial poly(std::initializer_list<const char*> cs) {
  std::vector<Rational> v;
  for (const char* c : cs) v.push_back(parse_fraction(c));
  return RationalPolynomial(std::move(v));
}

void expect_all_pass(const Report& r, long n) {
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << "N=" << n << " " << c.name << " " << c.detail;
}
}  // namespace

// Coefficients frozen from an independent Python Fraction implementation.
TEST(Fsz, FrozenPolynomials) {
  EXPECT_EQ(f_q_poly(1), poly({"-1/2", "0", "3/2", "1"}));
  EXPECT_EQ(f_p_poly(1), poly({"-2", "-3", "0", "1"}));
  EXPECT_EQ(f_q_poly(2), poly({"2/5", "0", "-3", "-4", "0", "12/5", "1"}));
  EXPECT_EQ(f_p_poly(2), poly({"5/2", "6", "0", "-10", "-15/2", "0", "1"}));
  EXPECT_EQ(f_q_poly(3), poly({"-7/20", "0", "9/2", "42/5", "0", "-63/5", "-21/2", "0", "63/20", "1"}));
  EXPECT_EQ(q_poly(1), poly({"-1/2", "1"}));
  EXPECT_EQ(p_poly(1), poly({"-2", "1"}));
  EXPECT_EQ(q_poly(2), poly({"2/5", "-8/5", "1"}));
  EXPECT_EQ(p_poly(2), poly({"5/2", "-4", "1"}));
  EXPECT_EQ(q_poly(3), poly({"-7/20", "21/10", "-57/20", "1"}));
  EXPECT_EQ(p_poly(3), poly({"-20/7", "57/7", "-6", "1"}));
}

TEST(Fsz, RejectsBadN) { EXPECT_THROW(Fsz(0), UsageError); }

// Negative control: any single-coefficient perturbation of Q breaks T-Q.
TEST(Fsz, PerturbedQFailsTq) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<long> num(-7, 7), den(1, 9);
  for (long n = 1; n <= 6; ++n) {
    const Fsz f(n);
    for (int trial = 0; trial < 15; ++trial) {
      std::vector<Rational> c = f.q.coefficients();
      std::uniform_int_distribution<std::size_t> pos(0, c.size() - 1);
      long a = num(rng);
      if (a == 0) a = 1;
      c[pos(rng)] += make_rational(a, den(rng));
      EXPECT_FALSE(nonzero_exponents(tq_residual(RationalPolynomial(c), n)).empty()) << n;
    }
    EXPECT_TRUE(nonzero_exponents(tq_residual(f.q, n)).empty());
  }
}

TEST(Fsz, BoundaryClosedFormsAtNOneDisagreeOnlyForSecondDerivatives) {
  // Q and P are linear at N=1; the closed forms for Q''(q^-1), P''(q^-1) are not zero there.
  const auto r = verify_boundary(Fsz(1));
  for (const auto& c : r.checks) {
    const bool second = c.name == "boundary Q''(q^-1)" || c.name == "boundary P''(q^-1)";
    EXPECT_EQ(c.passed, !second) << c.name;
  }
}

class PerN : public ::testing::TestWithParam<long> {};

TEST_P(PerN, TqWronskianStructureHyper) {
  const long n = GetParam();
  const Fsz f(n);
  const Check t = verify_tq(f);
  EXPECT_TRUE(t.passed) << t.detail;
  expect_all_pass(verify_wronskian(f), n);
  expect_all_pass(verify_structure(f), n);
  expect_all_pass(verify_leibniz(f), n);
  expect_all_pass(hypergeometric_check(f), n);
  const Check pc = verify_product_condition(f);
  EXPECT_TRUE(pc.passed) << pc.detail;
}

TEST_P(PerN, BoundaryTable) {
  const long n = GetParam();
  if (n == 1) GTEST_SKIP() << "covered by BoundaryClosedFormsAtNOneDisagreeOnlyForSecondDerivatives";
  expect_all_pass(verify_boundary(Fsz(n)), n);
}

INSTANTIATE_TEST_SUITE_P(UpToTwenty, PerN, ::testing::Range(1L, 21L));

TEST(Recurrences, UpToThirty) { expect_all_pass(recurrence_check(30), 30); }

TEST(Recurrences, FrozenInitialValues) {
  const auto a = sequences(0, 4);
  EXPECT_EQ(a.a1[1], Rational(2));
  EXPECT_EQ(a.a1[2], Rational(5));
  EXPECT_EQ(a.a2[1], Rational(1));
  EXPECT_EQ(a.a2[2], Rational(4));
  EXPECT_THROW(recurrence_check(2), UsageError);
}

TEST(Hypergeometric, ChuVandermonde) {
  // 2F1(-n, a; c; 1) = (c-a)_n / (c)_n, summed directly.
  for (unsigned n = 0; n <= 6; ++n) {
    const Rational a = make_rational(2, 3), c = make_rational(-7, 3);
    EXPECT_EQ(chu_vandermonde(n, a, c), hypergeometric_unit(n, a, c)) << n;
  }
}
