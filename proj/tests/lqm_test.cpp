#include <gtest/gtest.h>

#include <cmath>

#include "kpz/error.hpp"
#include "kpz/lqm.hpp"
#include "kpz/sampler.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

TEST(NormSq, ClosedForm) {
  for (double k : {0.1, 1.0, 2.5}) EXPECT_NEAR(kpz::lqm_norm_sq(k), 2 * k * std::sinh(kPi * k) / (kPi * kPi), 1e-12 * kpz::lqm_norm_sq(k));
}

class MatrixElement : public ::testing::TestWithParam<std::tuple<double, double, double>> {};

TEST_P(MatrixElement, BothSidesAgree) {
  const auto [alpha, k, kp] = GetParam();
  EXPECT_LT(kpz::verify_matrix_element(alpha, k, kp).rel_err(), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Points, MatrixElement,
                         ::testing::Values(std::tuple{1.0, 1.0, 1.0}, std::tuple{0.5, 0.5, 2.0}, std::tuple{2.0, 0.3, 1.7}));

class Id1 : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(Id1, BothSidesAgree) {
  const auto [w, k] = GetParam();
  EXPECT_LT(kpz::verify_id1(w, k).rel_err(), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Points, Id1, ::testing::Values(std::pair{1.0, 1.0}, std::pair{0.5, 0.25}, std::pair{2.0, 2.0}));

TEST(LaplaceJ, ZeroParameterRatioIsOne) {
  EXPECT_EQ(kpz::laplace_J_ratio({{0.5}, {0.0}, {1, 1, 1}}), 1.0);
  EXPECT_EQ(kpz::laplace_J_fp_ratio({{0.5}, {0.0}, {1, 1}}), 1.0);
}

TEST(LaplaceJ, PositiveWithSmallErrorEstimate) {
  const auto r = kpz::laplace_J({{0.5}, {0.4}, {1, 1, 1}});
  EXPECT_TRUE(r.converged);
  EXPECT_GT(r.value, 0);
  EXPECT_LT(r.abs_err, 1e-8 * r.value);
}

// Equal consecutive parameters merge the two blocks.
TEST(LaplaceJ, EqualParametersCollapse) {
  const kpz::ModelParams p{1, 1, 1};
  EXPECT_NEAR(kpz::laplace_J({{0.3, 0.6}, {0.4, 0.4}, p}).value, kpz::laplace_J({{0.6}, {0.4}, p}).value, 1e-12);
}

TEST(LaplaceJ, DecreasesBelowMinimum) {
  const kpz::ModelParams p{1, 1, 1};
  double previous = 1.0;
  for (double s : {0.1, 0.3, 0.5, 0.7}) {
    const double r = kpz::laplace_J_ratio({{0.5}, {s}, p});
    EXPECT_LT(r, previous) << s;
    previous = r;
  }
}

// A Laplace transform is log-convex in its argument.
TEST(LaplaceJ, LogConvexInParameter) {
  const kpz::ModelParams p{1, 1, 1};
  for (double s : {0.3, 0.8, 1.3}) {
    const double h = 0.2;
    const double lo = kpz::laplace_height({{0.5}, {s - h}, p});
    const double mid = kpz::laplace_height({{0.5}, {s}, p});
    const double hi = kpz::laplace_height({{0.5}, {s + h}, p});
    EXPECT_LE(mid * mid, lo * hi * (1 + 1e-9)) << s;
  }
}

TEST(LaplaceJ, StripAndOrderingEnforced) {
  const kpz::ModelParams p{1, 1, 1};
  EXPECT_THROW(kpz::laplace_J({{0.5}, {2.5}, p}), kpz::DomainError);
  EXPECT_THROW(kpz::laplace_J({{0.3, 0.6}, {0.1, 0.4}, p}), kpz::DomainError);
  EXPECT_THROW(kpz::laplace_J({{0.6, 0.3}, {0.4, 0.1}, p}), kpz::DomainError);
  EXPECT_THROW(kpz::laplace_J({{}, {}, p}), kpz::DomainError);
  EXPECT_THROW(kpz::laplace_J({{0.5}, {0.4}, {-1, 1, 1}}), kpz::DomainError);
}

TEST(LaplaceJ, TwoPointQueryConverges) {
  kpz::LqmOptions opt;
  opt.rel_tol = 1e-7;
  const double r = kpz::laplace_J_ratio({{0.3, 0.7}, {0.6, 0.2}, {1, 1, 1}}, opt);
  EXPECT_GT(r, 0);
  EXPECT_LT(r, 1);
}

TEST(LaplaceJFp, LargeIntervalLimit) {
  const double target = kpz::laplace_J_fp_ratio({{0.5}, {0.5}, {1, 1}});
  double previous = 1e9;
  for (double L : {4.0, 16.0, 64.0}) {
    const double sl = std::sqrt(L);
    const double gap = std::abs(kpz::laplace_J_ratio({{0.5 * L}, {0.5 / sl}, {1 / sl, 1 / sl, L}}) - target);
    EXPECT_LT(gap, previous) << L;
    previous = gap;
  }
  EXPECT_LT(previous, 0.01);
}

TEST(LaplaceJFp, MatchesRescaledMonteCarlo) {
  const kpz::RescaledParams r{1, 1};
  const double x = 0.5, s = 0.5;
  const double ratio = kpz::laplace_J_fp_ratio({{x}, {s}, r});
  const auto at = kpz::obs::value_at(x);
  const kpz::Observable f = [&](const kpz::Sample& smp) { return std::exp(-s * at(smp)); };
  const auto e = kpz::fp_is_estimate(f, r, 100000, 256, 31);
  EXPECT_NEAR(e.value, ratio, 3 * e.std_err);
}

}  // namespace
