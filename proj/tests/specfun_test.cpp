#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <complex>

#include "kpz/error.hpp"
#include "kpz/quadrature.hpp"
#include "kpz/specfun.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

// log|Γ(z)| by Stirling after shifting Re z above 20.
double stirling_log_abs_gamma(std::complex<double> z) {
  std::complex<double> shift = 0.0;
  while (z.real() < 20.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const std::complex<double> s = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * kPi) + 1.0 / (12.0 * z) -
                                 1.0 / (360.0 * std::pow(z, 3)) + 1.0 / (1260.0 * std::pow(z, 5));
  return (s - shift).real();
}

TEST(Erf, MatchesBoost) {
  for (double x : {-5.0, -1.3, -0.2, 0.0, 1e-8, 0.5, 1.0, 2.7, 6.0}) {
    EXPECT_NEAR(kpz::erf(x), boost::math::erf(x), 1e-15) << x;
    EXPECT_NEAR(kpz::erfc(x) / boost::math::erfc(x), 1.0, 1e-13) << x;
  }
  EXPECT_NEAR(kpz::erfc(1.0), 0.15729920705028513, 1e-15);
}

TEST(Erf, ErfcAgreesWithQuadrature) {
  const auto r = kpz::integrate_adaptive([](double t) { return 2.0 / std::sqrt(kPi) * std::exp(-t * t); },
                                         kpz::Domain::semi_infinite(1.0), 1e-14);
  EXPECT_NEAR(kpz::erfc(1.0), r.value, 1e-13);
}

TEST(Erfcx, LargeArgumentsStayFinite) {
  for (double x : {10.0, 30.0, 1e3, 1e6}) {
    const double asym = 1.0 / (x * std::sqrt(kPi)) * (1.0 - 0.5 / (x * x) + 0.75 / std::pow(x, 4));
    EXPECT_NEAR(kpz::erfcx(x) / asym, 1.0, 1e-5) << x;
  }
  EXPECT_NEAR(kpz::erfcx(0.5), std::exp(0.25) * boost::math::erfc(0.5), 1e-15);
  EXPECT_NEAR(kpz::erfcx(-2.0), std::exp(4.0) * boost::math::erfc(-2.0), 1e-12);
}

TEST(Gamma, LogGammaMatchesBoost) {
  for (double x : {1e-3, 0.5, 1.0, 2.5, 10.0, 171.3}) {
    EXPECT_NEAR(kpz::log_gamma(x), boost::math::lgamma(x), 1e-12 * std::max(1.0, std::abs(boost::math::lgamma(x))));
  }
}

TEST(Gamma, AbsGammaSquaredReflection) {
  EXPECT_NEAR(kpz::abs_gamma_sq(1, 1), kPi / std::sinh(kPi), 1e-14);
  for (double k : {0.05, 0.5, 1.0, 3.0, 10.0}) {
    EXPECT_NEAR(kpz::abs_gamma_sq(0, k) / (kPi / (k * std::sinh(kPi * k))), 1.0, 1e-12) << k;
    EXPECT_NEAR(kpz::abs_gamma_sq(0.5, k) / (kPi / std::cosh(kPi * k)), 1.0, 1e-12) << k;
  }
}

TEST(Gamma, ComplexLogGammaMatchesStirling) {
  for (double a : {-2.5, -0.3, 0.2, 1.0, 4.0}) {
    for (double b : {0.1, 1.0, 7.5, 40.0}) {
      EXPECT_NEAR(kpz::log_abs_gamma(a, b), stirling_log_abs_gamma({a, b}), 1e-10) << a << ' ' << b;
    }
  }
}

TEST(Gamma, PoleThrows) {
  EXPECT_THROW(kpz::log_abs_gamma(-2.0, 0.0), kpz::DomainError);
  EXPECT_THROW(kpz::log_abs_gamma(0.0, 0.0), kpz::DomainError);
}

TEST(Gamma, Gamma4IsProductOfFour) {
  const double alpha = 0.5, x = 0.3, y = 0.7;
  const double direct = 2 * (kpz::log_abs_gamma(alpha, x + y) + kpz::log_abs_gamma(alpha, x - y));
  EXPECT_NEAR(kpz::log_gamma4(alpha, x, y), direct, 1e-13);
  EXPECT_NEAR(kpz::gamma4(alpha, x, y), std::exp(direct), 1e-13 * std::exp(direct));
}

TEST(Gamma, IncompleteGammaMatchesBoost) {
  for (double a : {0.3, 1.0, 2.5, 30.0}) {
    for (double x : {0.01, 0.5, 2.0, 10.0, 45.0}) {
      EXPECT_NEAR(kpz::gamma_p(a, x), boost::math::gamma_p(a, x), 1e-12) << a << ' ' << x;
    }
  }
}

TEST(Exprel, SmallArgumentSeries) {
  EXPECT_EQ(kpz::exprel(0.0), 1.0);
  for (double x : {-1e-10, 1e-7, 1e-3, 0.3, -5.0, 40.0}) {
    EXPECT_NEAR(kpz::exprel(x), std::expm1(x) / x, 1e-14 * std::abs(std::expm1(x) / x)) << x;
  }
  EXPECT_NEAR(kpz::log_exprel(800.0), 800.0 - std::log(800.0), 1e-12);
}

TEST(NormalCdf, Symmetry) {
  for (double x : {0.0, 0.3, 1.7, 5.0}) EXPECT_NEAR(kpz::normal_cdf(x) + kpz::normal_cdf(-x), 1.0, 1e-15);
  EXPECT_NEAR(kpz::normal_cdf(1.0), 0.5 * boost::math::erfc(-1.0 / std::sqrt(2.0)), 1e-15);
}

TEST(BesselK, RealOrderZero) {
  EXPECT_NEAR(kpz::bessel_k_imag(0, 1), 0.42102443824070834, 1e-12);
  for (double x : {0.05, 0.7, 3.0, 20.0}) {
    const double ref = boost::math::cyl_bessel_k(0, x);
    EXPECT_NEAR(kpz::bessel_k_imag(0, x) / ref, 1.0, 1e-10) << x;
  }
}

TEST(BesselK, CosineCoshIntegral) {
  const auto r = kpz::integrate_adaptive([](double t) { return std::cos(t) * std::exp(-2 * std::cosh(t)); },
                                         kpz::Domain::semi_infinite(0.0), 1e-15);
  EXPECT_NEAR(kpz::bessel_k_imag(1, 2), r.value, 1e-12);
}

TEST(BesselK, OscillatoryRegimeFlagged) {
  EXPECT_FALSE(kpz::bessel_k_imag_checked(100.0, 0.5).accurate);
  EXPECT_TRUE(kpz::bessel_k_imag_checked(1.0, 1.0).accurate);
}

// K_{ik}(x) satisfies x²K'' + xK' - (x² - k²)K = 0.
TEST(BesselK, SatisfiesBesselEquation) {
  for (double k : {0.5, 2.0}) {
    for (double x : {0.8, 2.0}) {
      const double h = 1e-3;
      const double f0 = kpz::bessel_k_imag(k, x), fp = kpz::bessel_k_imag(k, x + h), fm = kpz::bessel_k_imag(k, x - h);
      const double d1 = (fp - fm) / (2 * h), d2 = (fp - 2 * f0 + fm) / (h * h);
      EXPECT_NEAR(x * x * d2 + x * d1 - (x * x - k * k) * f0, 0.0, 1e-6) << k << ' ' << x;
    }
  }
}

}  // namespace
