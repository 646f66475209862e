#include <gtest/gtest.h>

#include <random>

#include "rpm/scgf.hpp"
#include "rpm/xxz.hpp"

using namespace rpm;
using namespace rpm::xxz;

namespace {
void expect_all_pass(const Report& r) {
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.detail;
}
Complex stochastic_q() { return std::polar(1.0, std::numbers::pi / 3.0); }
}  // namespace

class Lengths : public ::testing::TestWithParam<long> {};

TEST_P(Lengths, TemperleyLiebAtStochasticPoint) {
  const long L = GetParam();
  const Complex u = std::polar(1.0, std::numbers::pi / (3.0 * static_cast<double>(L / 2)));
  EXPECT_NEAR(std::abs(two_q(stochastic_q()) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(kappa(L, u) - 1.0), 0.0, 1e-14);
  expect_all_pass(verify_tl(L, stochastic_q(), u));
}

TEST_P(Lengths, TemperleyLiebGenericParameters) {
  const long L = GetParam();
  expect_all_pass(verify_tl(L, std::polar(1.0, 0.7), std::polar(1.0, 0.3)));
  expect_all_pass(verify_tl(L, std::polar(1.0, 1.1), std::polar(1.0, -0.45)));
}

TEST_P(Lengths, SmallChecks) { expect_all_pass(verify_small(GetParam())); }

TEST_P(Lengths, BridgeGrid) { expect_all_pass(verify_bridge(GetParam(), {-0.1, 0.0, 0.1}, {-0.1, 0.0, 0.1})); }

INSTANTIATE_TEST_SUITE_P(Small, Lengths, ::testing::Values(4L, 6L, 8L));

TEST(Xxz, GeneratorSumConservesMagnetization) {
  const long L = 6;
  SpinOperator sum(1L << L, 1L << L), sz(1L << L, 1L << L);
  for (long i = 0; i < L; ++i) sum += tl_generator_matrix(L, std::polar(1.0, 0.7), std::polar(1.0, 0.3), i);
  for (long s = 0; s < (1L << L); ++s) sz.insert(s, s) = static_cast<double>(2 * std::popcount(static_cast<unsigned>(s)) - L);
  EXPECT_LT(max_abs(SpinOperator(sum * sz - sz * sum)), 1e-14);
}

TEST(Xxz, SectorDimension) {
  EXPECT_EQ(sector_basis(4).size(), 6u);
  EXPECT_EQ(sector_basis(8).size(), 70u);
  EXPECT_EQ(build_xxz(combinatorial_point(10)).rows(), 252);
  const auto basis = sector_basis(8);
  EXPECT_TRUE(std::is_sorted(basis.begin(), basis.end()));
}

TEST(Xxz, GeneratorIndexValidated) {
  EXPECT_THROW(tl_generator_matrix(4, 1.0, 1.0, 4), UsageError);
  EXPECT_THROW(tl_generator_matrix(5, 1.0, 1.0, 0), UsageError);
  EXPECT_THROW(tl_generator_matrix(14, 1.0, 1.0, 0), ResourceError);
}

class Ground : public ::testing::TestWithParam<long> {};

TEST_P(Ground, ThreeQuartersL) {
  const long L = GetParam();
  EXPECT_NEAR(ground_energy(combinatorial_point(L)), -0.75 * static_cast<double>(L), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(FourToFourteen, Ground, ::testing::Values(4L, 6L, 8L, 10L, 12L, 14L));

TEST(Lanczos, RandomHermitianAgainstDense) {
  std::mt19937 rng(4);
  std::normal_distribution<double> g;
  const long n = 120;
  Eigen::MatrixXcd a(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  const Eigen::MatrixXcd h = a + a.adjoint();
  const SpinOperator sh = h.sparseView();
  const auto r = lanczos_smallest(sh);
  EXPECT_NEAR(r.eigenvalue, dense_spectrum(sh)[0], 1e-9);
  EXPECT_LT(r.residual, 1e-10);
}

TEST(Lanczos, GenericParametersAgainstDense) {
  for (long L : {4L, 6L, 8L}) {
    const SpinOperator h = build_xxz({L, 0.37, std::polar(1.0, 0.21)});
    EXPECT_LT(hermiticity_defect(h), 1e-13);
    EXPECT_NEAR(lanczos_smallest(h).eigenvalue, dense_spectrum(h)[0], 1e-10);
  }
}

TEST(Bridge, StochasticPointIsZero) { EXPECT_NEAR(lambda_bridge(4, 0.0, 0.0), 0.0, 1e-9); }

TEST(Bridge, SingleFieldPoints) {
  const StateSpace space(6);
  EXPECT_NEAR(lambda_bridge(6, 0.1, 0.0), scgf::lambda(space, {0.1, 0.0}).lambda, 1e-8);
  EXPECT_NEAR(lambda_bridge(6, 0.0, 0.1), scgf::lambda(space, {0.0, 0.1}).lambda, 1e-8);
}

TEST(Bridge, ParameterMap) {
  const auto p = bridge_params(6, 0.0, 0.0);
  EXPECT_NEAR(p.delta, -0.5, 1e-15);
  EXPECT_NEAR(std::abs(p.u - combinatorial_point(6).u), 0.0, 1e-15);
  const auto p2 = bridge_params(6, 0.2, 0.1);
  EXPECT_NEAR(std::abs(kappa(6, p2.u) - std::exp(0.2)), 0.0, 1e-12);
  EXPECT_NEAR(-2.0 * p2.delta, std::exp(-0.1), 1e-15);
}

TEST(Bridge, OutsideRegime) {
  EXPECT_THROW(bridge_params(4, 0.0, -1.0), UsageError);
  EXPECT_THROW(bridge_params(4, 1.5, 0.0), UsageError);
  EXPECT_THROW(bridge_params(5, 0.0, 0.0), UsageError);
  EXPECT_NO_THROW(bridge_params(4, 2.0 * std::log(2.0), -std::log(2.0)));
}
