#include <gtest/gtest.h>

#include "rpm/stationary.hpp"

using namespace rpm;
using namespace rpm::exact;

// Integer forms below come from an independent sympy nullspace computation.

TEST(Stationary, GeneratorColumnsSumToZero) {
  for (long L = 2; L <= 8; L += 2) {
    const auto g = build_generator(L);
    for (const auto& s : g.column_sums()) EXPECT_EQ(s, Rational(0));
  }
}

TEST(Stationary, FrozenIntegerFormL4) {
  const auto sv = stationary_distribution(4);
  std::vector<BigInt> want = {3, 1, 1, 3, 1, 1};
  EXPECT_EQ(sv.integer_form, want);
  EXPECT_EQ(sv.integer_sum, BigInt(10));
  EXPECT_EQ(sv.integer_min, BigInt(1));
}

TEST(Stationary, FrozenIntegerFormL6) {
  const auto sv = stationary_distribution(6);
  std::vector<BigInt> want = {25, 9, 9, 5, 1, 9, 5, 1, 5, 25, 9, 9, 5, 1, 1, 9, 5, 5, 1, 1};
  EXPECT_EQ(sv.integer_form, want);
  EXPECT_EQ(sv.integer_sum, BigInt(140));
  EXPECT_EQ(expected_peaks(sv), make_rational(81, 35));
  const auto d = exact_drifts(StateSpace(6), sv);
  EXPECT_EQ(d.diamond, make_rational(129, 35));
  EXPECT_EQ(d.global, make_rational(9, 70));
}

TEST(Stationary, SpotValues) {
  auto r2 = stationary_report(2);
  EXPECT_EQ(r2.peaks, Rational(1));
  EXPECT_EQ(r2.omega, make_rational(1, 2));
  auto r4 = stationary_report(4);
  EXPECT_EQ(r4.peaks, make_rational(8, 5));
  EXPECT_EQ(r4.omega, make_rational(1, 5));
  EXPECT_EQ(r4.drifts.diamond, make_rational(12, 5));
  EXPECT_EQ(r4.drifts.global, make_rational(1, 5));
}

TEST(Stationary, HalfTurnAsmCounts) {
  const long want[] = {1, 2, 10, 140, 5544, 622908};
  for (unsigned n = 1; n <= 5; ++n) EXPECT_EQ(half_turn_symmetric_asm_count(n), BigInt(want[n])) << n;
}

TEST(Stationary, KernelRejectsRankDeficiency) {
  SparseRationalMatrix m(3);
  EXPECT_THROW(one_dimensional_kernel(m), VerificationError);
}

class ClosedForms : public ::testing::TestWithParam<long> {};

TEST_P(ClosedForms, ExactAgreement) {
  const long L = GetParam();
  const auto r = stationary_report(L);
  EXPECT_TRUE(r.peaks_ok) << to_fraction_string(r.peaks);
  EXPECT_TRUE(r.omega_ok) << to_fraction_string(r.omega);
  EXPECT_TRUE(r.diamond_ok) << to_fraction_string(r.drifts.diamond);
  EXPECT_TRUE(r.global_ok) << to_fraction_string(r.drifts.global);
  EXPECT_TRUE(r.drifts.tile_balance);
  EXPECT_TRUE(r.smallest_is_one);
  EXPECT_TRUE(r.sum_matches_asm) << r.sv.integer_sum.get_str() << " vs " << r.asm_count.get_str();
}

INSTANTIATE_TEST_SUITE_P(UpToTen, ClosedForms, ::testing::Values(2L, 4L, 6L, 8L, 10L));

TEST(Stationary, CapEnforced) { EXPECT_THROW(stationary_distribution(14), ResourceError); }
