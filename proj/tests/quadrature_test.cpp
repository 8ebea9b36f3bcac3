#include <gtest/gtest.h>

#include <cmath>

#include "kpz/error.hpp"
#include "kpz/quadrature.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

TEST(Adaptive, Polynomial) {
  const auto r = kpz::integrate_adaptive([](double x) { return 3 * x * x; }, kpz::Domain::finite(0, 2));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 8.0, 1e-13);
}

TEST(Adaptive, GaussianOnHalfLine) {
  const auto r = kpz::integrate_adaptive([](double x) { return std::exp(-x * x); }, kpz::Domain::semi_infinite(0));
  EXPECT_NEAR(r.value, std::sqrt(kPi) / 2, 1e-12);
  EXPECT_LT(r.abs_err, 1e-10);
}

TEST(Adaptive, WholeLine) {
  const double inf = std::numeric_limits<double>::infinity();
  const auto r = kpz::integrate_adaptive([](double x) { return 1 / (1 + x * x); }, kpz::Domain{-inf, inf});
  EXPECT_NEAR(r.value, kPi, 1e-10);
}

TEST(Adaptive, ExhaustionReportsPartialResult) {
  kpz::QuadOptions opt;
  opt.max_subdivisions = 3;
  opt.rel_tol = 1e-15;
  opt.abs_tol = 0;
  const auto r = kpz::integrate_adaptive([](double x) { return std::sin(1 / x); }, kpz::Domain::finite(1e-4, 1), opt);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(std::isfinite(r.value));
  EXPECT_THROW(kpz::require_converged(r, "oscillatory"), kpz::QuadratureError);
}

TEST(TanhSinh, EndpointSingularity) {
  const auto r = kpz::integrate_tanh_sinh([](double x) { return 1 / std::sqrt(x); }, 0, 1);
  EXPECT_NEAR(r.value, 2.0, 1e-10);
  const auto l = kpz::integrate_tanh_sinh([](double x) { return std::log(x); }, 0, 1);
  EXPECT_NEAR(l.value, -1.0, 1e-10);
}

// Additivity over a split point.
TEST(Adaptive, AdditiveOverSubintervals) {
  auto f = [](double x) { return std::exp(-x) * std::cos(3 * x); };
  const double whole = kpz::integrate_adaptive(f, kpz::Domain::finite(0, 5)).value;
  for (double c : {0.3, 1.7, 4.2}) {
    const double parts =
        kpz::integrate_adaptive(f, kpz::Domain::finite(0, c)).value + kpz::integrate_adaptive(f, kpz::Domain::finite(c, 5)).value;
    EXPECT_NEAR(whole, parts, 1e-12);
  }
}

}  // namespace
