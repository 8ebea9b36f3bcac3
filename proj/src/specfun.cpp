#include "kpz/specfun.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "kpz/error.hpp"

namespace kpz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kHalfLog2Pi = 0.91893853320467274178;

// Lanczos g=7, n=9 coefficients.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Bernoulli terms B_{2k}/(2k(2k-1)) for the Stirling series.
constexpr std::array<double, 7> kStirling = {
    1.0 / 12.0,     -1.0 / 360.0,       1.0 / 1260.0,   -1.0 / 1680.0,
    1.0 / 1188.0,   -691.0 / 360360.0,  1.0 / 156.0};

double erfcx_cf(double x) {
  // Lentz evaluation of sqrt(pi) e^{x^2} erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / (f * kSqrtPi);
}

}  // namespace

double erf(double x) { return std::erf(x); }

double erfc(double x) { return std::erfc(x); }

double erfcx(double x) {
  if (x < 5.0) return std::exp(x * x) * std::erfc(x);
  return erfcx_cf(x);
}

double log_gamma(double x) {
  require(x > 0.0 && std::isfinite(x), "log_gamma: argument must be positive");
  if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
  const double z = x - 1.0;
  double s = kLanczos[0];
  for (int i = 1; i < 9; ++i) s += kLanczos[i] / (z + i);
  const double t = z + 7.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(s);
}

double log_abs_gamma(double a, double b) {
  b = std::abs(b);
  if (b == 0.0 && a <= 0.0 && a == std::floor(a))
    throw DomainError("log_abs_gamma: pole at nonpositive integer");
  if (b == 0.0 && a > 0.0) return log_gamma(a);

  // Shift the real part until |z| is large, then use Stirling on log Gamma(z).
  double shift_log = 0.0;
  double prod = 1.0;
  while (a * a + b * b < 225.0 || a < 0.0) {
    prod *= a * a + b * b;
    if (prod > 1e250 || prod < 1e-250) {
      shift_log += std::log(prod);
      prod = 1.0;
    }
    a += 1.0;
  }
  shift_log += std::log(prod);

  const std::complex<double> z(a, b);
  const std::complex<double> inv = 1.0 / z;
  const std::complex<double> inv2 = inv * inv;
  std::complex<double> series = 0.0;
  std::complex<double> p = inv;
  for (double c : kStirling) {
    series += c * p;
    p *= inv2;
  }
  const std::complex<double> lg = (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series;
  return lg.real() - 0.5 * shift_log;
}

double abs_gamma_sq(double a, double b) { return std::exp(2.0 * log_abs_gamma(a, b)); }

double log_gamma4(double alpha, double x, double y) {
  require(alpha > 0.0, "gamma4: alpha must be positive");
  return 2.0 * (log_abs_gamma(alpha, x + y) + log_abs_gamma(alpha, x - y));
}

double gamma4(double alpha, double x, double y) { return std::exp(log_gamma4(alpha, x, y)); }

double exprel(double x) {
  if (std::abs(x) < 1e-5) return 1.0 + x * (0.5 + x / 6.0);
  return std::expm1(x) / x;
}

double log_exprel(double x) {
  if (std::abs(x) < 1e-5) return x * (0.5 + x / 24.0);
  if (x > 0.0) return x + std::log(-std::expm1(-x) / x);
  return std::log(std::expm1(x) / x);
}

double gamma_p(double a, double x) {
  require(a > 0.0, "gamma_p: shape must be positive");
  if (x <= 0.0) return 0.0;
  const double log_pref = a * std::log(x) - x - log_gamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(log_pref);
  }
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int n = 1; n < 10000; ++n) {
    const double an = -n * (n - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(log_pref) * h;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

double cosh_m1(double t) {
  const double s = std::sinh(0.5 * t);
  return 2.0 * s * s;
}

// 20-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
constexpr std::array<double, 10> kGLx = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
    0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
    0.9639719272779138, 0.9931285991850949};
constexpr std::array<double, 10> kGLw = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
    0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
    0.0406014298003869, 0.0176140071391521};

}  // namespace

double bessel_k_imag(double nu, double x, const SpecFunConfig&) {
  require(x > 0.0 && std::isfinite(x), "bessel_k_imag: x must be positive");
  require(nu >= 0.0, "bessel_k_imag: order must be nonnegative");
  // K_{i nu}(x) = e^{-x} int_0^inf cos(nu t) e^{-x (cosh t - 1)} dt. Panels break at
  // half-periods of the cosine and where the exponent doubles, so each panel is smooth
  // enough for a fixed 20-point Gauss-Legendre rule.
  const double tmax = std::acosh(1.0 + 40.0 / x);
  const double osc = nu > 0.0 ? kPi / nu : tmax;
  double sum = 0.0;
  double t0 = 0.0;
  double level = 1.0 / 64.0;
  while (t0 < tmax) {
    double t1 = std::min({t0 + osc, t0 + 1.0, tmax});
    // next exponent level x (cosh t - 1) = level
    while (level < 40.0 && x * cosh_m1(t0) >= level) level *= 2.0;
    if (level < 40.0) {
      const double tl = std::acosh(1.0 + level / x);
      if (tl > t0 && tl < t1) t1 = tl;
    }
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    double panel = 0.0;
    for (int i = 0; i < 10; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const double t = mid + sgn * half * kGLx[i];
        panel += kGLw[i] * std::cos(nu * t) * std::exp(-x * cosh_m1(t));
      }
    }
    sum += half * panel;
    t0 = t1;
  }
  return std::exp(-x) * sum;
}

BesselKResult bessel_k_imag_checked(double nu, double x, const SpecFunConfig& cfg) {
  return {bessel_k_imag(nu, x, cfg), !(x < nu / 50.0)};
}

}  // namespace kpz
