#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <vector>

#include "kpz/analytic.hpp"
#include "kpz/error.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;
using boost::math::quadrature::gauss_kronrod;

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  return gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol);
}

// E[exp(Σ c_i X(t_i))] for Brownian motion with diffusion 1/2.
double gaussian_mgf(const std::vector<double>& c, const std::vector<double>& t) {
  double var = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) var += c[i] * c[j] * 0.5 * std::min(t[i], t[j]);
  return std::exp(0.5 * var);
}

// 𝒵 = E[e^{-2vX(L)} Z^{n}] for u+v = -n by expanding Z^n into n-fold Gaussian integrals.
double norm_by_moments(double v, double L, int n) {
  if (n == 1) return integrate([&](double x) { return gaussian_mgf({-2 * v, -2}, {L, x}); }, 0, L);
  return integrate(
      [&](double x) {
        auto g = [&](double y) { return gaussian_mgf({-2 * v, -2, -2}, {L, x, y}); };
        return integrate(g, 0, x, 1e-11) + integrate(g, x, L, 1e-11);
      },
      0, L, 1e-11);
}

TEST(NormZ, ZeroWeightIsGaussian) { EXPECT_NEAR(kpz::norm_Z({0.3, -0.3, 2}), std::exp(0.18), 1e-13); }

TEST(NormZ, HalfZeroIsInverseSquareRoot) { EXPECT_NEAR(kpz::norm_Z({0.5, 0, 4}), 0.5, 1e-10); }

TEST(NormZ, FirstFamilyMatchesGaussianExpansion) {
  EXPECT_NEAR(kpz::norm_Z({-0.2, -0.8, 1}), 1.4261168419, 1e-9);
  for (double v : {-0.8, -0.5, 0.3, 1.2}) {
    for (double L : {0.5, 1.0, 3.0}) {
      const double ref = norm_by_moments(v, L, 1);
      EXPECT_NEAR(kpz::norm_Z({-1 - v, v, L}) / ref, 1.0, 1e-10) << v << ' ' << L;
    }
  }
  EXPECT_NEAR(kpz::norm_Z({-0.5, -0.5, 1}), std::exp(0.25), 1e-10);
}

TEST(NormZ, SecondFamilyMatchesGaussianExpansion) {
  for (double v : {-1.3, -1.0, -0.4, 0.7}) {
    const double L = 1.3;
    EXPECT_NEAR(kpz::norm_Z({-2 - v, v, L}) / norm_by_moments(v, L, 2), 1.0, 1e-9) << v;
  }
}

TEST(NormZ, ContinuousAcrossPoles) {
  for (double vp : {0.0, -0.5, -1.0}) {
    const double below = kpz::log_norm_Z({-2 - (vp - 1e-7), vp - 1e-7, 1.0});
    const double at = kpz::log_norm_Z({-2 - vp, vp, 1.0});
    const double above = kpz::log_norm_Z({-2 - (vp + 1e-7), vp + 1e-7, 1.0});
    EXPECT_NEAR(below, at, 1e-6);
    EXPECT_NEAR(above, at, 1e-6);
  }
}

TEST(PdfY, SymmetricPointErfForm) {
  for (double L : {1.0, 4.0}) {
    for (double Y : {-1.5, 0.0, 0.4, 2.0}) {
      const double ref = (boost::math::erf((L - 2 * Y) / (2 * std::sqrt(L))) +
                          boost::math::erf((L + 2 * Y) / (2 * std::sqrt(L)))) /
                         (2 * L);
      EXPECT_NEAR(kpz::pdf_Y({-0.5, -0.5, L}, Y), ref, 1e-12) << L << ' ' << Y;
    }
  }
  EXPECT_NEAR(kpz::pdf_Y({-0.5, -0.5, 1}, 0), boost::math::erf(0.5), 1e-12);
}

TEST(PdfY, SymmetricAtSymmetricPoint) {
  for (double Y : {0.1, 0.9, 2.5}) EXPECT_NEAR(kpz::pdf_Y({-0.5, -0.5, 1}, Y), kpz::pdf_Y({-0.5, -0.5, 1}, -Y), 1e-14);
}

class PdfNormalization : public ::testing::TestWithParam<kpz::ModelParams> {};

TEST_P(PdfNormalization, IntegratesToOne) {
  const auto p = GetParam();
  const double mass = integrate([&](double y) { return kpz::pdf_Y(p, y); }, -30, 30);
  EXPECT_NEAR(mass, 1.0, 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Families, PdfNormalization,
                         ::testing::Values(kpz::ModelParams{-0.2, -0.8, 1}, kpz::ModelParams{0.5, -1.5, 2},
                                           kpz::ModelParams{-1, -1, 1}, kpz::ModelParams{-3.5, 0.5, 1.5},
                                           kpz::ModelParams{0.4, 0.6, 1}, kpz::ModelParams{-2, -2, 0.7},
                                           kpz::ModelParams{-5, -1, 1}));

TEST(PdfY, SecondFamilyClosedFormMatchesIntegral) {
  for (double v : {-1.3, 0.4}) {
    for (double Y : {-1.0, 0.0, 1.0}) {
      const kpz::ModelParams p{-2 - v, v, 1};
      EXPECT_NEAR(kpz::pdf_Y(p, Y), kpz::pdf_Y_integral(p, Y), 1e-8) << v << ' ' << Y;
    }
  }
}

TEST(CumulantY, MeanClosedForm) {
  const double v = -0.8, L = 1, a = 2 * v + 1;
  const double ref = L * (1 / (1 - std::exp(a * L)) - v - 1) + 1 / a;
  EXPECT_NEAR(kpz::cumulant_Y({-0.2, -0.8, 1}, 1), ref, 1e-10);
  EXPECT_NEAR(ref, 0.3497025, 1e-7);
}

TEST(CumulantY, MeanMatchesDensity) {
  const kpz::ModelParams p{-0.2, -0.8, 1};
  const double m = integrate([&](double y) { return y * kpz::pdf_Y(p, y); }, -30, 30);
  EXPECT_NEAR(kpz::cumulant_Y(p, 1), m, 1e-8);
}

TEST(CumulantY, SymmetricPointMoments) {
  EXPECT_NEAR(kpz::cumulant_Y({-0.5, -0.5, 1}, 1), 0.0, 1e-10);
  EXPECT_NEAR(kpz::cumulant_Y({-0.5, -0.5, 1}, 2), 7.0 / 12, 1e-8);
  EXPECT_NEAR(kpz::cumulant_Y({-0.5, -0.5, 3}, 2), 3.0 * 9 / 12, 1e-8);
}

TEST(CumulantY, HigherOrdersMatchDensity) {
  const kpz::ModelParams p{-0.3, -0.7, 2};
  auto moment = [&](int k) { return integrate([&](double y) { return std::pow(y, k) * kpz::pdf_Y(p, y); }, -30, 30); };
  const double m1 = moment(1), m2 = moment(2), m3 = moment(3), m4 = moment(4);
  EXPECT_NEAR(kpz::cumulant_Y(p, 2), m2 - m1 * m1, 1e-7);
  EXPECT_NEAR(kpz::cumulant_Y(p, 3), m3 - 3 * m2 * m1 + 2 * std::pow(m1, 3), 1e-5);
  const double k4 = m4 - 4 * m3 * m1 - 3 * m2 * m2 + 12 * m2 * m1 * m1 - 6 * std::pow(m1, 4);
  EXPECT_NEAR(kpz::cumulant_Y(p, 4), k4, 1e-4);
}

TEST(MeanProfile, ParabolaAtSymmetricPoint) {
  for (double x : {0.0, 0.2, 0.5, 1.0}) EXPECT_NEAR(kpz::mean_profile({-0.5, -0.5, 1}, x), -x * (1 - x) / 2, 1e-10);
  EXPECT_NEAR(kpz::mean_profile({-0.5, -0.5, 1}, 0.5), -0.125, 1e-12);
}

TEST(MeanProfile, EndpointIsMean) {
  const kpz::ModelParams p{-0.2, -0.8, 1.7};
  EXPECT_NEAR(kpz::mean_profile(p, p.L), kpz::cumulant_Y(p, 1), 1e-10);
}

TEST(MeanProfile, RequiresFirstFamily) { EXPECT_THROW(kpz::mean_profile({1, 1, 1}, 0.5), kpz::DomainError); }

TEST(ScalingProfile, LargeIntervalLimit) {
  const double L = 50, v_t = 1, v = v_t / L - 0.5;
  const kpz::ModelParams p{-1 - v, v, L};
  for (double xt : {0.25, 0.5, 0.75}) {
    const double finite = kpz::mean_profile(p, xt * L) / L;
    EXPECT_NEAR(finite, kpz::scaling_profile(v_t, xt), 2.0 / L) << xt;
  }
}

TEST(MomentZ, RatioOfNormalizations) {
  const kpz::ModelParams p{0.4, -0.4, 1.5};
  const double ref = norm_by_moments(-0.4, 1.5, 1) / std::exp(0.16 * 1.5);
  EXPECT_NEAR(kpz::moment_Z(p, 1), ref, 1e-9);
  EXPECT_EQ(kpz::moment_Z(p, 0), 1.0);
}

TEST(LaplaceLimit, GammaProduct) {
  EXPECT_NEAR(kpz::laplace_limit(1, 1, 1), kPi * kPi / 4, 1e-12);
  EXPECT_EQ(kpz::laplace_limit(1, 1, 0), 1.0);
  EXPECT_THROW(kpz::laplace_limit(1, 1, 2.5), kpz::DomainError);
}

TEST(LaplaceFinite, UnitAtZeroAndApproachesLimit) {
  EXPECT_NEAR(kpz::laplace_finite({1, 1, 3}, 0), 1.0, 1e-10);
  const double limit = kpz::laplace_limit(1, 1, 1);
  double previous = 1e9;
  for (double L : {1.0, 10.0, 100.0}) {
    const double gap = std::abs(kpz::laplace_finite({1, 1, L}, 1) - limit);
    EXPECT_LT(gap, previous) << L;
    previous = gap;
  }
}

TEST(LaplaceFinite, StripEnforced) { EXPECT_THROW(kpz::laplace_finite({1, 0.5, 1}, -1.5), kpz::DomainError); }

TEST(FpNorm, ClosedForm) {
  EXPECT_NEAR(kpz::fp_norm({1, 0}), std::exp(1.0) * boost::math::erfc(1.0), 1e-14);
  EXPECT_NEAR(kpz::fp_norm({1, 0}), 0.427583576, 1e-9);
}

TEST(FpNorm, DiagonalIsDerivative) {
  auto phi = [](double t) { return t * std::exp(t * t) * boost::math::erfc(t); };
  for (double t : {-0.7, 0.0, 0.5, 2.0}) {
    const double h = 1e-3;
    const double d1 = (phi(t + h) - phi(t - h)) / (2 * h);
    const double d2 = (phi(t + 2 * h) - phi(t - 2 * h)) / (4 * h);
    EXPECT_NEAR(kpz::fp_norm({t, t}), (4 * d1 - d2) / 3, 1e-9 * std::max(1.0, std::abs(d1))) << t;
  }
}

class FpPdfNormalization : public ::testing::TestWithParam<kpz::RescaledParams> {};

TEST_P(FpPdfNormalization, IntegratesToOne) {
  const auto r = GetParam();
  EXPECT_NEAR(integrate([&](double y) { return kpz::fp_pdf_Y(r, y); }, -40, 40), 1.0, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Params, FpPdfNormalization,
                         ::testing::Values(kpz::RescaledParams{1, 2}, kpz::RescaledParams{1, 1},
                                           kpz::RescaledParams{-0.5, 1}, kpz::RescaledParams{-1, -1.5},
                                           kpz::RescaledParams{0, 0}, kpz::RescaledParams{8, 8}));

TEST(FpPdfY, ExcursionConcentration) {
  const kpz::RescaledParams r{8, 8};
  const double outside = integrate([&](double y) { return kpz::fp_pdf_Y(r, y); }, -40, -0.5) +
                         integrate([&](double y) { return kpz::fp_pdf_Y(r, y); }, 0.5, 40);
  EXPECT_LT(outside, 0.05);
}

TEST(FpLaplace, MatchesDensityTransform) {
  const kpz::RescaledParams r{1, 1};
  const double c = 0.5;
  const double ref = integrate([&](double y) { return std::exp(-c * y) * kpz::fp_pdf_Y(r, y); }, -40, 40);
  EXPECT_NEAR(kpz::fp_laplace(r, c), ref, 1e-8);
}

TEST(FpLaplace, SlopeAtZeroIsMinusMean) {
  const kpz::RescaledParams r{1, 2};
  const double mean = integrate([&](double y) { return y * kpz::fp_pdf_Y(r, y); }, -40, 40);
  const double h = 1e-5;
  EXPECT_NEAR((kpz::fp_laplace(r, h) - kpz::fp_laplace(r, -h)) / (2 * h), -mean, 1e-7);
}

TEST(FpMinEnd, MarginalIsEndpointDensity) {
  const kpz::RescaledParams r{1, 1};
  const double Y = 0.3;
  const double marginal = integrate([&](double y) { return kpz::fp_min_end_pdf(r, y, Y); }, -20, 0);
  EXPECT_NEAR(marginal, kpz::fp_pdf_Y(r, Y), 1e-6);
}

TEST(FpMinEnd, TotalMass) {
  const kpz::RescaledParams r{0.5, 1.5};
  const double mass = integrate(
      [&](double y) { return integrate([&](double Y) { return kpz::fp_min_end_pdf(r, y, Y); }, y, y + 20); }, -20, 0);
  EXPECT_NEAR(mass, 1.0, 1e-7);
}

TEST(FpJointMin, ArgminMarginal) {
  const kpz::RescaledParams r{1, 0.5};
  const double y = -0.4, Y = 0.2;
  const double m = integrate([&](double x) { return kpz::fp_joint_min_pdf(r, y, x, Y); }, 0, 1);
  EXPECT_NEAR(m, kpz::fp_min_end_pdf(r, y, Y), 1e-7);
}

TEST(FpMultipoint, ReducesToEndpointDensity) {
  EXPECT_NEAR(kpz::fp_multipoint_pdf({1, 1}, {}, {}, 0.2), kpz::fp_pdf_Y({1, 1}, 0.2), 1e-15);
}

TEST(FpMultipoint, IntermediateValueIntegratesOut) {
  for (const kpz::RescaledParams r : {kpz::RescaledParams{1, 1}, kpz::RescaledParams{-0.5, 0.2}}) {
    const double Y = 0.3;
    const double m = integrate([&](double X1) { return kpz::fp_multipoint_pdf(r, {0.4}, {X1}, Y); }, -15, 15);
    EXPECT_NEAR(m, kpz::fp_pdf_Y(r, Y), 1e-6) << r.u_t;
  }
}

TEST(FpF, SymmetricAndPositive) {
  EXPECT_NEAR(kpz::fp_F(1.3, 0.4), kpz::fp_F(0.4, 1.3), 1e-15);
  EXPECT_GT(kpz::fp_F(2, 2), 0);
}

TEST(EwMeanProfile, Parabola) {
  EXPECT_NEAR(kpz::ew_mean_profile({1, 1}, 0.5), 0.25, 1e-15);
  EXPECT_NEAR(kpz::ew_mean_profile({2, -1}, 0.3), 0.6 - 0.045, 1e-15);
}

TEST(GammaExpectation, PolynomialMoments) {
  for (double b : {0.4, 1.0, 2.5}) {
    const double a = 0.7, xi = 1.3;
    EXPECT_NEAR(kpz::gamma_expectation(b, a, xi, -1), a * b + xi, 1e-9) << b;
    EXPECT_NEAR(kpz::gamma_expectation(b, a, xi, -2), a * a * b * (b + 1) + 2 * a * b * xi + xi * xi, 1e-8) << b;
  }
  EXPECT_NEAR(kpz::gamma_expectation(1.5, 0, 2, 3), std::pow(2, -3), 1e-12);
}

TEST(DeltaLimit, Regions) {
  EXPECT_NEAR(kpz::delta_limit({-1, 0, 1}, 1, 1, 0), 1.0, 1e-15);
  EXPECT_NEAR(kpz::delta_limit({-1, 0.5, 1}, 1, 2, 0.3), std::exp(-0.75 * 0.3) * std::pow(2, 0.5), 1e-14);
  EXPECT_NEAR(kpz::delta_limit({0.5, -1, 1}, 1, 1, 0), kpz::gamma_expectation(1.5, 1, 1, -0.5), 1e-14);
  EXPECT_NEAR(kpz::delta_limit({1, 1, 1}, 1, 1, 0), kpz::gamma_expectation(1, 1, 1, 1), 1e-14);
}

TEST(Phase, Classification) {
  EXPECT_EQ(kpz::phase_of(1, 1), kpz::Phase::maximal_current);
  EXPECT_EQ(kpz::phase_of(0.5, -1), kpz::Phase::high_density);
  EXPECT_EQ(kpz::phase_of(-1, 0.5), kpz::Phase::low_density);
  EXPECT_EQ(kpz::phase_of(-1, -1), kpz::Phase::boundary);
}

}  // namespace
