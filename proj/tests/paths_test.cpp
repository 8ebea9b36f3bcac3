#include <gtest/gtest.h>

#include <boost/math/distributions/gamma.hpp>
#include <cmath>

#include "kpz/error.hpp"
#include "kpz/paths.hpp"
#include "kpz/specfun.hpp"
#include "kpz/stats.hpp"

namespace {

Eigen::VectorXd column_at(const Eigen::MatrixXd& paths, Eigen::Index row) { return paths.row(row).transpose(); }

double mean(const Eigen::VectorXd& x) { return x.mean(); }
double stderr_of(const Eigen::VectorXd& x) {
  return std::sqrt((x.array() - x.mean()).square().sum() / (x.size() - 1.0) / x.size());
}

TEST(Brownian, VarianceDriftAndCovariance) {
  const kpz::Stream root(1);
  const double L = 2, v = -0.7;
  const Eigen::MatrixXd paths =
      kpz::sample_columns(40000, 64, root, [&](kpz::Stream& s) { return kpz::sample_brownian(L, 64, -v, 0.5, s); });
  const Eigen::VectorXd end = column_at(paths, 64), mid = column_at(paths, 16);
  EXPECT_NEAR(mean(end), -v * L, 4 * stderr_of(end));
  const Eigen::VectorXd centred = end.array() - (-v * L);
  const Eigen::VectorXd sq = centred.array().square();
  EXPECT_NEAR(sq.mean(), L / 2, 4 * stderr_of(sq));
  const Eigen::VectorXd cov = (end.array() + v * L) * (mid.array() + v * 0.5);
  EXPECT_NEAR(cov.mean(), 0.5 * 0.5, 4 * stderr_of(cov));
}

TEST(Bridge, PinnedEndsAndCovariance) {
  const kpz::Stream root(2);
  const double L = 3;
  const Eigen::MatrixXd paths =
      kpz::sample_columns(40000, 30, root, [&](kpz::Stream& s) { return kpz::sample_bridge(L, 30, 0.4, s); });
  EXPECT_EQ(paths.row(30).maxCoeff(), 0.4);
  EXPECT_EQ(paths.row(30).minCoeff(), 0.4);
  EXPECT_EQ(paths.row(0).cwiseAbs().maxCoeff(), 0.0);
  const double s = 1.0, t = 2.0;
  const Eigen::VectorXd xs = column_at(paths, 10).array() - 0.4 * s / L;
  const Eigen::VectorXd xt = column_at(paths, 20).array() - 0.4 * t / L;
  const Eigen::VectorXd prod = xs.cwiseProduct(xt);
  EXPECT_NEAR(prod.mean(), std::min(s, t) - s * t / L, 4 * stderr_of(prod));
}

TEST(Excursion, PositiveInteriorAndSymmetricMidpoint) {
  const kpz::Stream root(3);
  const int n = 2000;
  const Eigen::MatrixXd paths =
      kpz::sample_columns(20000, n, root, [&](kpz::Stream& s) { return kpz::sample_excursion(n, s); });
  EXPECT_EQ(paths.row(0).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(paths.row(n).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(paths.middleRows(1, n - 1).minCoeff(), 0.0);
  const Eigen::VectorXd a = column_at(paths, 3 * n / 10), b = column_at(paths, 7 * n / 10);
  EXPECT_TRUE(kpz::ks_two_sample(a, b).passed);
  // e(1/2) = ½χ₃ in law; the grid minimum sits O(√Δ) above the continuum one
  const Eigen::VectorXd mid = column_at(paths, n / 2);
  EXPECT_NEAR(mean(mid), std::sqrt(2 / std::acos(-1.0)), 4 * stderr_of(mid) + 0.6 / std::sqrt(n));
}

TEST(Meander, RayleighEndpoint) {
  const kpz::Stream root(4);
  const Eigen::MatrixXd paths =
      kpz::sample_columns(100000, 16, root, [](kpz::Stream& s) { return kpz::sample_meander(16, s); });
  EXPECT_GT(paths.middleRows(1, 16).minCoeff(), 0.0);
  const auto ks = kpz::ks_one_sample(column_at(paths, 16), [](double a) { return a <= 0 ? 0.0 : 1 - std::exp(-a * a / 2); });
  EXPECT_LT(ks.statistic, 0.02);
}

TEST(ExpFunctional, ExactCases) {
  kpz::Path flat(2.0, 100);
  EXPECT_NEAR(kpz::exp_functional(flat), 2.0, 1e-14);
  kpz::Path line(1.0, 1000);
  for (Eigen::Index i = 0; i <= 1000; ++i) line.values(i) = line.x(i);
  EXPECT_NEAR(kpz::exp_functional(line), (1 - std::exp(-2.0)) / 2, 1e-6);
}

TEST(ExpFunctional, ModesAgree) {
  kpz::Stream s(5);
  for (int rep = 0; rep < 20; ++rep) {
    const kpz::Path p = kpz::sample_brownian(3, 200, 0.3, 0.5, s);
    const double direct = kpz::exp_functional(p, 0.2, kpz::ExpMode::direct);
    const double lse = kpz::exp_functional(p, 0.2, kpz::ExpMode::log_sum_exp);
    EXPECT_NEAR(direct / lse, 1.0, 1e-12);
    EXPECT_NEAR(std::log(direct), kpz::log_exp_functional(p, 0.2), 1e-12);
  }
}

TEST(ExpFunctional, OverflowGuard) {
  kpz::Path deep(1.0, 10);
  deep.values.setConstant(-400.0);
  deep.values(0) = 0;
  EXPECT_TRUE(std::isfinite(kpz::log_exp_functional(deep)));
  EXPECT_NEAR(kpz::log_exp_functional(deep), 800 + std::log(0.95), 1e-10);
}

TEST(ExpFunctional, RefinementConsistent) {
  kpz::Stream s(6);
  const kpz::Path fine = kpz::sample_brownian(1, 1 << 14, 0, 0.5, s);
  const double ref = kpz::exp_functional(fine);
  double previous = 1e9;
  for (int n : {64, 256, 1024}) {
    kpz::Path coarse(1.0, n);
    for (int i = 0; i <= n; ++i) coarse.values(i) = fine.values(i * ((1 << 14) / n));
    const double err = std::abs(kpz::exp_functional(coarse) - ref);
    EXPECT_LT(err, previous * 1.5);
    previous = err;
  }
  EXPECT_LT(previous, 0.01);
}

// 1/∫_0^∞ e^{-2B_μ} with diffusion 1/2 and drift μ > 0 is Gamma(2μ, 1).
TEST(ExpFunctional, InverseGammaLaw) {
  const kpz::Stream root(7);
  const int count = 20000;
  Eigen::VectorXd inv(count);
  kpz::parallel_for(count, [&](std::size_t j) {
    kpz::Stream s = root.split(j);
    inv(j) = 1.0 / kpz::exp_functional(kpz::sample_brownian(20, 4000, 1.0, 0.5, s));
  });
  EXPECT_NEAR(inv.mean(), 2.0, 3 * stderr_of(inv) + 0.01);
  const boost::math::gamma_distribution<> g(2.0, 1.0);
  EXPECT_LT(kpz::ks_one_sample(inv, [&](double x) { return x <= 0 ? 0.0 : boost::math::cdf(g, x); }).statistic, 0.03);
}

TEST(Energy, SpecialCasesAndWeightForm) {
  kpz::Stream s(8);
  const kpz::Path p = kpz::sample_brownian(2, 300, 0.1, 0.5, s);
  EXPECT_EQ(kpz::energy(p, {0, 0, 2}), 0.0);
  const kpz::Path flat(2.0, 50);
  EXPECT_NEAR(kpz::energy(flat, {0.3, 0.9, 2}), 1.2 * std::log(2.0), 1e-14);
  for (const kpz::ModelParams q : {kpz::ModelParams{0.3, -1.2, 2}, kpz::ModelParams{-2, 0.5, 2}}) {
    EXPECT_NEAR(kpz::energy(p, q), kpz::energy_weight_form(p, q), 1e-12);
  }
}

TEST(Energy, ReversalSymmetry) {
  kpz::Stream s(9);
  for (int rep = 0; rep < 10; ++rep) {
    const kpz::Path p = kpz::sample_brownian(1.5, 256, -0.4, 0.5, s);
    const kpz::ModelParams q{0.7, -1.3, 1.5};
    EXPECT_NEAR(kpz::energy(kpz::reversed(p), {q.v, q.u, q.L}), kpz::energy(p, q), 1e-10);
  }
}

TEST(FpLogWeight, FormsAgree) {
  kpz::Stream s(10);
  for (int rep = 0; rep < 10; ++rep) {
    const kpz::Path p = kpz::sample_brownian(1, 128, 0, 0.5, s);
    const kpz::RescaledParams r{1.3, -0.4};
    EXPECT_NEAR(kpz::fp_log_weight(p, r), kpz::fp_log_weight_symmetric(p, r), 1e-12);
    EXPECT_EQ(kpz::fp_log_weight(p, {0, 0}), 0.0);
  }
  kpz::Path up(1.0, 10);
  for (int i = 0; i <= 10; ++i) up.values(i) = 0.1 * i;
  EXPECT_NEAR(kpz::fp_log_weight(up, {2, 0.5}), -2 * 0.5 * 1.0, 1e-15);
}

TEST(TTransform, ZeroIsIdentity) {
  kpz::Stream s(11);
  const kpz::Path p = kpz::sample_brownian(1, 100, 0, 1, s);
  EXPECT_EQ(kpz::t_transform(p, 0.0).values, p.values);
}

TEST(TTransform, DomainViolation) {
  const kpz::Path flat(1.0, 100);
  EXPECT_THROW(kpz::t_transform(flat, -2.0), kpz::DomainError);
  EXPECT_NO_THROW(kpz::t_transform(flat, -0.5));
}

// With every integral taken on the same grid the identities hold up to trapezoid error.
TEST(TTransform, IdentitiesOnFineGrid) {
  kpz::Stream s(12);
  const kpz::Path p = kpz::sample_brownian(1, 1 << 14, 0, 1, s);
  auto inv_int = [](const kpz::Path& q) { return std::exp(-kpz::log_running_exp_integral(q)(q.n_steps())); };
  const double z = 1.0, zp = 0.5;
  EXPECT_NEAR(inv_int(kpz::t_transform(p, z)) - inv_int(p), z, 1e-4);
  const kpz::Path composed = kpz::t_transform(kpz::t_transform(p, z), zp);
  EXPECT_LT((composed.values - kpz::t_transform(p, z + zp).values).cwiseAbs().maxCoeff(), 1e-4);
  const kpz::Path back = kpz::t_transform(kpz::t_transform(p, z), -z);
  EXPECT_LT((back.values - p.values).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(HalfLine, HighDensityWithOppositeParametersIsDriftedBrownian) {
  const kpz::Stream root(13);
  const double u = 0.5;
  const Eigen::MatrixXd paths = kpz::sample_columns(
      40000, 100, root, [&](kpz::Stream& s) { return kpz::sample_hy_high_density(u, -u, 1.0, 100, s); });
  EXPECT_EQ(paths.row(0).cwiseAbs().maxCoeff(), 0.0);
  const auto ks = kpz::ks_one_sample(column_at(paths, 100), [&](double x) { return kpz::normal_cdf(x - u); });
  EXPECT_TRUE(ks.passed) << ks.statistic;
}

TEST(HalfLine, HighDensitySlope) {
  const kpz::Stream root(14);
  const Eigen::MatrixXd paths = kpz::sample_columns(
      2000, 400, root, [](kpz::Stream& s) { return kpz::sample_hy_high_density(0.5, -1, 20, 400, s); });
  const Eigen::VectorXd slope = (column_at(paths, 400) - column_at(paths, 200)) / 10.0;
  EXPECT_NEAR(slope.mean(), 1.0, 4 * stderr_of(slope));
}

TEST(HalfLine, MaxCurrentSmallDistanceVariance) {
  const kpz::Stream root(15);
  const Eigen::MatrixXd paths = kpz::sample_columns(
      40000, 100, root, [](kpz::Stream& s) { return kpz::sample_hy_max_current(1.0, 0.01, 100, s); });
  const Eigen::VectorXd end = column_at(paths, 100);
  const Eigen::VectorXd sq = (end.array() - end.mean()).square();
  EXPECT_NEAR(sq.mean() / 0.01, 1.0, 0.05);
}

TEST(HalfLine, RegionChecks) {
  kpz::Stream s(16);
  EXPECT_THROW(kpz::sample_hy_max_current(-1, 1, 10, s), kpz::DomainError);
  EXPECT_THROW(kpz::sample_hy_high_density(0.5, 0.5, 1, 10, s), kpz::DomainError);
  EXPECT_THROW(kpz::sample_fp_halfline({1, 1}, kpz::HalfLineRegion::low_density, 1, 10, s), kpz::DomainError);
  EXPECT_THROW(kpz::sample_fp_halfline({-1, 0}, kpz::HalfLineRegion::max_current, 1, 10, s), kpz::DomainError);
}

TEST(FpHalfLine, LowDensityIsDriftedBrownian) {
  const kpz::Stream root(17);
  const double ut = -0.6;
  const Eigen::MatrixXd paths = kpz::sample_columns(40000, 50, root, [&](kpz::Stream& s) {
    return kpz::sample_fp_halfline({ut, 1}, kpz::HalfLineRegion::low_density, 1, 50, s);
  });
  EXPECT_TRUE(kpz::ks_one_sample(column_at(paths, 50), [&](double x) { return kpz::normal_cdf(x - ut); }).passed);
}

TEST(FpHalfLine, HighDensityWithOppositeParameters) {
  const kpz::Stream root(18);
  const double ut = 0.8;
  const Eigen::MatrixXd paths = kpz::sample_columns(40000, 400, root, [&](kpz::Stream& s) {
    return kpz::sample_fp_halfline({ut, -ut}, kpz::HalfLineRegion::high_density, 1, 400, s);
  });
  const auto ks = kpz::ks_one_sample(column_at(paths, 400), [&](double x) { return kpz::normal_cdf(x - ut); });
  EXPECT_TRUE(ks.passed) << ks.statistic;
}

TEST(FpHalfLine, MaxCurrentLargeRateIsBesselPlusBrownian) {
  const kpz::Stream root(19);
  const Eigen::MatrixXd paths = kpz::sample_columns(20000, 200, root, [](kpz::Stream& s) {
    return kpz::sample_fp_halfline({1e6, 1}, kpz::HalfLineRegion::max_current, 1, 200, s);
  });
  // B' - 2 min B' is a Bessel-3 process with diffusion 1/2 and B adds a centred Gaussian
  const Eigen::VectorXd end = column_at(paths, 200);
  EXPECT_NEAR(end.mean(), std::sqrt(0.5) * 2 * std::sqrt(2 / std::acos(-1.0)), 4 * stderr_of(end));
  const Eigen::VectorXd sq = end.array().square();
  EXPECT_NEAR(sq.mean(), 0.5 * 3 + 0.5, 4 * stderr_of(sq));
}

TEST(EwLimit, MeanProfileAndEndSlope) {
  const kpz::Stream root(20);
  const Eigen::MatrixXd paths =
      kpz::sample_columns(100000, 100, root, [](kpz::Stream& s) { return kpz::sample_ew_limit({1, 1}, 100, s); });
  const Eigen::VectorXd mid = column_at(paths, 50);
  EXPECT_NEAR(mean(mid), 0.25, 3 * stderr_of(mid));
  const Eigen::VectorXd slope = (column_at(paths, 100) - column_at(paths, 90)) / 0.1;
  EXPECT_NEAR(slope.mean(), 1 - 2 * 0.95, 4 * stderr_of(slope));
  const Eigen::VectorXd centred = mid.array() - mid.mean();
  EXPECT_NEAR(centred.squaredNorm() / (mid.size() - 1), 0.25, 0.01);
}

TEST(Samplers, ReproducibleFromSeed) {
  kpz::Stream a(21), b(21);
  EXPECT_EQ(kpz::sample_meander(50, a).values, kpz::sample_meander(50, b).values);
  EXPECT_EQ(kpz::sample_hy_max_current(0.7, 5, 50, a).values, kpz::sample_hy_max_current(0.7, 5, 50, b).values);
}

}  // namespace
