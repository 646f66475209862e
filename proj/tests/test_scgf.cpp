#include <gtest/gtest.h>

#include <cmath>

#include "rpm/scgf.hpp"
#include "rpm/stationary.hpp"

using namespace rpm;
using namespace rpm::scgf;

// L=2: tilted matrix [[-1, e^{alpha+2 beta}], [1, -1]] -> Lambda = -1 + e^{(alpha + 2 beta)/2}.
TEST(Scgf, TwoSiteClosedForm) {
  const StateSpace space(2);
  for (double a : {-0.5, 0.0, 0.3})
    for (double b : {-0.2, 0.0, 0.4}) {
      const double want = -1.0 + std::exp((a + 2.0 * b) / 2.0);
      EXPECT_NEAR(lambda(space, {a, b}).lambda, want, 1e-12) << a << " " << b;
    }
}

TEST(Scgf, DeformedColumnSumsVanishAtOrigin) {
  const SparseMatrix m = build_deformed(6, {0.0, 0.0});
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.cols());
  const Eigen::VectorXd sums = Eigen::RowVectorXd(ones.transpose() * m).transpose();
  EXPECT_LT(sums.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Scgf, OriginIsZero) {
  for (long L = 2; L <= 12; L += 2) {
    const auto r = lambda(StateSpace(L), {0.0, 0.0});
    EXPECT_LT(std::abs(r.lambda), 1e-12) << L;
    EXPECT_LT(r.residual, 1e-10);
  }
}

TEST(Scgf, PowerIterationAgreesWithDense) {
  for (long L : {4L, 6L, 8L})
    for (auto p : {DeformedParams{0.2, -0.1}, DeformedParams{-0.3, 0.25}, DeformedParams{0.0, 0.0}}) {
      const SparseMatrix m = build_deformed(L, p);
      const auto dense = dense_largest(m);
      const auto power = power_iteration(m);
      EXPECT_NEAR(dense.lambda, power.lambda, 1e-10) << L;
      ASSERT_TRUE(dense.gap.has_value());
      EXPECT_GT(*dense.gap, 0.0);
    }
}

TEST(Scgf, UsesPowerIterationAboveThreshold) {
  const auto r = lambda(StateSpace(12), {0.05, 0.05});
  EXPECT_FALSE(r.dense);
  EXPECT_LT(r.residual, 1e-10);
}

TEST(Scgf, StepValidation) {
  EXPECT_THROW(scgf_derivatives(4, 0.0), UsageError);
  EXPECT_THROW(scgf_derivatives(4, 1e-2), UsageError);
  EXPECT_THROW(build_deformed(14, {0.0, 0.0}), ResourceError);
  EXPECT_THROW(build_deformed(4, {std::nan(""), 0.0}), UsageError);
}

class Derivs : public ::testing::TestWithParam<long> {};

TEST_P(Derivs, MatchExactDrifts) {
  const long L = GetParam();
  const auto rep = exact::stationary_report(L);
  const auto d = scgf_derivatives(L, 1e-3);
  const double ga = rep.drifts.global.get_d(), gb = rep.drifts.diamond.get_d();
  EXPECT_LT(std::abs(d.d_alpha - ga) / ga, 1e-6) << d.d_alpha;
  EXPECT_LT(std::abs(d.d_beta - gb) / gb, 1e-6) << d.d_beta;
}

INSTANTIATE_TEST_SUITE_P(UpToTen, Derivs, ::testing::Values(2L, 4L, 6L, 8L, 10L));

TEST(Scgf, Convexity) {
  const StateSpace space(6);
  EXPECT_LE(midpoint_convexity_violation(space, true), 1e-12);
  EXPECT_LE(midpoint_convexity_violation(space, false), 1e-12);
}

TEST(Scgf, MonotoneInBothFields) {
  const StateSpace space(6);
  EXPECT_LT(lambda(space, {-0.1, 0.0}).lambda, lambda(space, {0.1, 0.0}).lambda);
  EXPECT_LT(lambda(space, {0.0, -0.1}).lambda, lambda(space, {0.0, 0.1}).lambda);
}
