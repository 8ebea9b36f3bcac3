#include "kpz/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kpz/error.hpp"
#include "kpz/quadrature.hpp"
#include "kpz/specfun.hpp"

namespace kpz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kIntTol = 1e-12;

bool near(double a, double b) { return std::abs(a - b) < kIntTol; }

/// n when u+v = -n for an integer 1 <= n <= kMaxFamilyOrder, else 0.
int family_order(double w) {
  const double n = -std::round(w);
  if (n >= 1 && n <= kMaxFamilyOrder && near(w, -n)) return static_cast<int>(n);
  return 0;
}

double log_sinh(double x) { return x + std::log(-std::expm1(-2.0 * x)) - std::log(2.0); }

double log_binomial(int n, int k) {
  return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

/// Signed log-sum-exp; returns log of the (positive) total.
double log_signed_sum(const std::vector<double>& logs, const std::vector<int>& signs) {
  double m = -INFINITY;
  for (double l : logs) m = std::max(m, l);
  double acc = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) acc += signs[i] * std::exp(logs[i] - m);
  if (!(acc > 0.0)) throw DomainError("norm_Z: alternating sum lost all precision");
  return m + std::log(acc);
}

double log_family_direct(int n, double v, double L) {
  std::vector<double> logs;
  std::vector<int> signs;
  for (int k = 0; k <= n; ++k) {
    if (k + v == 0.0) continue;
    int sign = ((n - k) % 2 == 0) ? 1 : -1;
    double l = log_binomial(n, k) + std::log(2.0 * std::abs(k + v)) + L * (k + v) * (k + v);
    if (k + v < 0.0) sign = -sign;
    for (int j = 0; j <= n; ++j) {
      const double d = k + 2.0 * v + j;
      l -= std::log(std::abs(d));
      if (d < 0.0) sign = -sign;
    }
    logs.push_back(l);
    signs.push_back(sign);
  }
  return log_signed_sum(logs, signs);
}

/// The sum has removable poles at 2v ∈ {0, -1, ..., -2n}; near one of them the
/// log is interpolated from nodes on both sides.
double log_family(int n, double v, double L) {
  const double pole = std::round(2.0 * v) / 2.0;
  if (pole <= 0.0 && pole >= -n && std::abs(v - pole) < 0.005) {
    std::array<double, 8> xs{}, ys{};
    for (int i = 0; i < 4; ++i) {
      xs[2 * i] = pole - 0.01 * (i + 1);
      xs[2 * i + 1] = pole + 0.01 * (i + 1);
    }
    for (int i = 0; i < 8; ++i) ys[i] = log_family_direct(n, xs[i], L);
    double result = 0.0;
    for (int i = 0; i < 8; ++i) {
      double basis = 1.0;
      for (int j = 0; j < 8; ++j)
        if (j != i) basis *= (v - xs[j]) / (xs[i] - xs[j]);
      result += basis * ys[i];
    }
    return result;
  }
  return log_family_direct(n, v, L);
}

/// Unnormalized u+v = 1 density of Y.
double log_density_w1(double v, double L, double Y) {
  return -Y * Y / L - 2.0 * v * Y - 0.5 * std::log(kPi * L) - std::log(L) - log_exprel(-2.0 * Y);
}

double log_norm_w1(double v, double L) {
  const double c = -v * L;
  const double R = 12.0 * std::sqrt(L) + 12.0 + L;
  const double ref = log_density_w1(v, L, c);
  auto f = [&](double Y) { return std::exp(log_density_w1(v, L, Y) - ref); };
  QuadOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-13;
  const QuadResult r = require_converged(integrate_adaptive(f, Domain::finite(c - R, c + R), opt), "norm_Z");
  return ref + std::log(r.value);
}

/// erfc(x1) - erfc(x2) for 0 <= x1 < x2 with x2² - x1² = gap, kept in log form.
double log_erfc_diff(double x1, double x2, double gap) {
  if (x1 >= 0.0) return -x1 * x1 + std::log(erfcx(x1) - erfcx(x2) * std::exp(-gap));
  return std::log(std::erfc(x1) - std::erfc(x2));
}

double phi(double t) { return t * erfcx(t); }

struct PhiDerivs {
  double d1, d3;
};

PhiDerivs phi_derivs(double t) {
  const double e0 = erfcx(t);
  const double e1 = 2.0 * t * e0 - 2.0 * kInvSqrtPi;
  const double e2 = 2.0 * e0 + 2.0 * t * e1;
  const double e3 = 4.0 * e1 + 2.0 * t * e2;
  return {e0 + t * e1, 3.0 * e2 + t * e3};
}

/// (φ(a) - φ(b))/(a - b), with a Taylor branch when a ≈ b.
double phi_divided_difference(double a, double b) {
  const double d = a - b;
  if (std::abs(d) < 1e-3) {
    const PhiDerivs pd = phi_derivs(0.5 * (a + b));
    return pd.d1 + pd.d3 * d * d / 24.0;
  }
  return (phi(a) - phi(b)) / d;
}

/// 1/√π - z erfcx(z), accurate for large z.
double mills_gap(double z) {
  if (z < 6.0) return kInvSqrtPi - z * erfcx(z);
  const double inv = 1.0 / (2.0 * z * z);
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 20; ++k) {
    term *= (2.0 * k - 1.0) * inv;
    sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
  }
  return kInvSqrtPi * sum;
}

double dG_db(double p, double q, double dt) {
  if (p <= 0.0 || q <= 0.0) return 0.0;
  return 4.0 * (p + q) / (dt * std::sqrt(kPi * dt)) * std::exp(-(p + q) * (p + q) / dt);
}

}  // namespace

Phase phase_of(double u, double v) {
  if (u > 0.0 && v > 0.0) return Phase::maximal_current;
  if (v < 0.0 && u > v) return Phase::high_density;
  if (u < 0.0 && u < v) return Phase::low_density;
  return Phase::boundary;
}

std::string to_string(Phase p) {
  switch (p) {
    case Phase::maximal_current: return "maximal_current";
    case Phase::high_density: return "high_density";
    case Phase::low_density: return "low_density";
    case Phase::boundary: return "boundary";
  }
  return "unknown";
}

double log_norm_Z(const ModelParams& p) {
  require(p.L > 0.0, "norm_Z: L must be positive");
  const double w = p.w();
  if (near(w, 0.0)) return p.v * p.v * p.L;
  if (near(p.u, 0.5) && near(p.v, 0.0)) return -0.5 * std::log(p.L);
  if (const int n = family_order(w)) {
    if (n == 1) return p.v * p.v * p.L + std::log(p.L) + log_exprel((1.0 + 2.0 * p.v) * p.L);
    return log_family(n, p.v, p.L);
  }
  if (near(w, 1.0)) return log_norm_w1(p.v, p.L);
  throw DomainError("norm_Z: no closed form for u+v = " + std::to_string(w) +
                    "; supported: u+v in {0, 1, -1, ..., -6} or (u,v) = (1/2, 0)");
}

double norm_Z(const ModelParams& p) { return std::exp(log_norm_Z(p)); }

double pdf_Y_integral(const ModelParams& p, double Y) {
  const int n = family_order(p.w());
  require(n >= 1, "pdf_Y_integral: requires u+v = -n, 1 <= n <= 6");
  const double L = p.L;
  const double ay = std::abs(Y);
  const double R = std::max(ay, 0.5 * n * L) + 8.0 * std::sqrt(L) + 10.0;
  auto logf = [&](double r) {
    if (r <= ay) return -std::numeric_limits<double>::infinity();
    return std::log(r) - r * r / L +
           n * (std::log(2.0) + log_sinh(0.5 * (r + ay)) + log_sinh(0.5 * (r - ay)));
  };
  const double log_pref = (n + 1) * std::log(2.0) - (n + 2.0 * p.v) * Y - log_gamma(n + 1.0) -
                          0.5 * std::log(kPi * L * L * L) - log_norm_Z(p);
  const double crude_bound = log_pref + std::log(R - ay) + std::log(R) - ay * ay / L + n * R;
  if (crude_bound < -800.0) return 0.0;
  // the log-integrand is concave in r, so the peak is found by golden section
  double lo = ay, hi = R;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (logf(a) < logf(b)) lo = a; else hi = b;
  }
  const double r_peak = 0.5 * (lo + hi);
  const double peak = logf(r_peak);
  auto f = [&](double r) { return std::exp(logf(r) - peak); };
  QuadOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-12;
  const double left = require_converged(integrate_adaptive(f, Domain::finite(ay, r_peak), opt), "pdf_Y").value;
  const double right = require_converged(integrate_adaptive(f, Domain::finite(r_peak, R), opt), "pdf_Y").value;
  return std::exp(log_pref + peak + std::log(left + right));
}

double pdf_Y(const ModelParams& p, double Y) {
  require(p.L > 0.0, "pdf_Y: L must be positive");
  const double w = p.w();
  const double L = p.L;
  const double sL = std::sqrt(L);
  if (near(w, 0.0)) {
    const double z = Y + p.v * L;
    return std::exp(-z * z / L) / std::sqrt(kPi * L);
  }
  if (near(w, 1.0)) return std::exp(log_density_w1(p.v, L, Y) - log_norm_w1(p.v, L));
  const int n = family_order(w);
  if (n == 1) {
    const double a = 1.0 + 2.0 * p.v;
    const double ay = std::abs(Y);
    const double x1 = (2.0 * ay - L) / (2.0 * sL);
    const double x2 = (2.0 * ay + L) / (2.0 * sL);
    const double logD = log_erfc_diff(x1, x2, 2.0 * ay);
    return std::exp(-a * Y + 0.25 * L + logD - std::log(2.0) - log_norm_Z(p));
  }
  if (n == 2) {
    const double ay = std::abs(Y);
    const double y1 = (ay - L) / sL, y2 = (ay + L) / sL;
    const double x1 = (2.0 * ay - L) / (2.0 * sL), x2 = (2.0 * ay + L) / (2.0 * sL);
    const double log_pref = 0.25 * L - 2.0 * (p.v + 1.0) * Y - std::log(2.0) - log_norm_Z(p);
    const double t1 = std::exp(log_pref + 0.75 * L + log_erfc_diff(y1, y2, 4.0 * ay));
    const double t2 = std::exp(log_pref + std::log(2.0 * std::cosh(Y)) + log_erfc_diff(x1, x2, 2.0 * ay));
    const double diff = t1 - t2;
    if (diff > 1e-8 * t1) return diff;
    return pdf_Y_integral(p, Y);
  }
  if (n >= 3) return pdf_Y_integral(p, Y);
  throw DomainError("pdf_Y: supported for u+v in {0, 1, -1, ..., -6}");
}

double cumulant_Y(const ModelParams& p, int order) {
  require(near(p.w(), -1.0), "cumulant_Y: requires u+v = -1");
  require(order >= 1, "cumulant_Y: order must be >= 1");
  require(p.L > 0.0, "cumulant_Y: L must be positive");
  const double L = p.L;
  const double x = (1.0 + 2.0 * p.v) * L;
  if (order == 1) {
    double ph;
    if (std::abs(x) < 1e-2) {
      const double x2 = x * x;
      ph = 0.5 - x / 12.0 + x * x2 / 720.0 - x * x2 * x2 / 30240.0;
    } else {
      ph = -1.0 / std::expm1(x) + 1.0 / x;
    }
    return L * ph - L * (p.v + 1.0);
  }
  if (order == 2) {
    double ps;
    if (std::abs(x) < 0.05) {
      const double x2 = x * x;
      ps = 1.0 / 12.0 - x2 / 240.0 + x2 * x2 / 6048.0 - x2 * x2 * x2 / 172800.0;
    } else {
      const double sh = std::sinh(0.5 * x);
      ps = 1.0 / (x * x) - 1.0 / (4.0 * sh * sh);
    }
    return 0.5 * L + L * L * ps;
  }
  auto f = [L](double v) { return v * v * L + std::log(L) + log_exprel((1.0 + 2.0 * v) * L); };
  auto central = [&](double h) {
    double acc = 0.0;
    for (int k = 0; k <= order; ++k) {
      const double c = std::exp(log_binomial(order, k)) * ((k % 2 == 0) ? 1.0 : -1.0);
      acc += c * f(p.v + (0.5 * order - k) * h);
    }
    return acc / std::pow(h, order);
  };
  const double h = 0.05 / std::max(1.0, L);
  const double d = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  return std::pow(-0.5, order) * d;
}

double mean_profile(const ModelParams& p, double x) {
  require(near(p.w(), -1.0), "mean_profile: requires u+v = -1");
  require(x >= 0.0 && x <= p.L, "mean_profile: x must lie in [0, L]");
  if (x == 0.0) return 0.0;
  const double L = p.L;
  const double a = 1.0 + 2.0 * p.v;
  ModelParams px = p;
  px.L = x;
  const double first =
      cumulant_Y(px, 1) * std::exp(std::log(x / L) + log_exprel(a * x) - log_exprel(a * L));
  const double second = (p.v + 1.0) * x * (L - x) / L *
                        std::exp(a * x + log_exprel(a * (L - x)) - log_exprel(a * L));
  return first - second;
}

double scaling_profile(double v_t, double x_t) {
  require(x_t >= 0.0 && x_t <= 1.0, "scaling_profile: x_t must lie in [0, 1]");
  const double t = 2.0 * v_t;
  const double y = t * x_t;
  double h;
  if (std::abs(y) < 0.05) {
    h = 0.5 + y * (1.0 / 6.0 + y * (1.0 / 24.0 + y * (1.0 / 120.0 + y * (1.0 / 720.0 + y / 5040.0))));
  } else {
    h = (std::expm1(y) - y) / (y * y);
  }
  return 0.25 * (4.0 * x_t * x_t * h / exprel(t) - 2.0 * x_t);
}

double moment_Z(const ModelParams& p, double k) {
  if (k == 0.0) return 1.0;
  ModelParams shifted = p;
  shifted.u -= k;
  return std::exp(log_norm_Z(shifted) - log_norm_Z(p));
}

double laplace_finite(const ModelParams& p, double c) {
  require(p.u > 0.0 && p.v > 0.0, "laplace_finite: requires u, v > 0");
  require(c > -2.0 * p.v && c < 2.0 * p.u, "laplace_finite: requires -2v < c < 2u");
  require(p.L > 0.0, "laplace_finite: L must be positive");
  if (c == 0.0) return 1.0;
  const double L = p.L;
  auto logf = [&](double cc, double k) {
    return std::log(k) + log_sinh(kPi * k) - std::log(kPi) + 2.0 * log_abs_gamma(0.5 * cc + p.v, 0.5 * k) +
           2.0 * log_abs_gamma(p.u - 0.5 * cc, 0.5 * k) - 0.25 * k * k * L;
  };
  double kmax = std::sqrt(166.0 / L) + 2.0;
  double peak = -INFINITY;
  for (int i = 1; i <= 200; ++i) peak = std::max(peak, logf(0.0, kmax * i / 200.0));
  while (std::max(logf(0.0, kmax), logf(c, kmax)) - peak > -45.0) kmax *= 1.5;
  QuadOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-13;
  auto integral = [&](double cc) {
    auto f = [&](double k) { return k > 0.0 ? std::exp(logf(cc, k) - peak) : 0.0; };
    return require_converged(integrate_adaptive(f, Domain::finite(0.0, kmax), opt), "laplace_finite").value;
  };
  return integral(c) / integral(0.0);
}

double laplace_limit(double u, double v, double c) {
  require(u > 0.0 && v > 0.0, "laplace_limit: requires u, v > 0");
  require(c > -2.0 * v && c < 2.0 * u, "laplace_limit: requires -2v < c < 2u");
  if (c == 0.0) return 1.0;
  return std::exp(2.0 * (log_gamma(0.5 * c + v) + log_gamma(u - 0.5 * c) - log_gamma(v) - log_gamma(u)));
}

double fp_norm(const RescaledParams& r) { return phi_divided_difference(r.u_t, r.v_t); }

double fp_pdf_Y(const RescaledParams& r, double Y) {
  const double s = r.s();
  const double lead = -2.0 * r.v_t * Y - Y * Y + 2.0 * s * std::min(Y, 0.0);
  const double z = 0.5 * s + std::abs(Y);
  double bracket;
  if (s > 0.0) {
    bracket = mills_gap(z) + std::abs(Y) * erfcx(z);
  } else {
    bracket = kInvSqrtPi - 0.5 * s * erfcx(z);
  }
  return std::exp(lead) * bracket / fp_norm(r);
}

double fp_F(double a, double b) {
  a = std::abs(a);
  b = std::abs(b);
  require(a + b > 0.0, "fp_F: a and b cannot both vanish");
  return kPi * phi_divided_difference(0.5 * a, 0.5 * b) / (2.0 * (a + b));
}

double fp_laplace(const RescaledParams& r, double c) {
  require(r.u_t > 0.0 && r.v_t > 0.0, "fp_laplace: requires u_t, v_t > 0");
  require(c > -2.0 * r.v_t && c < 2.0 * r.u_t, "fp_laplace: requires -2 v_t < c < 2 u_t");
  if (c == 0.0) return 1.0;
  return fp_F(2.0 * r.v_t + c, 2.0 * r.u_t - c) / fp_F(2.0 * r.v_t, 2.0 * r.u_t);
}

double fp_joint_min_pdf(const RescaledParams& r, double y, double x, double Y) {
  require(x > 0.0 && x < 1.0, "fp_joint_min_pdf: x must lie in (0, 1)");
  require(y <= 0.0 && Y >= y, "fp_joint_min_pdf: requires y <= 0 and Y >= y");
  const double lx = std::log(x), l1x = std::log1p(-x);
  const double log_val = std::log(4.0 * std::abs(y) * (Y - y) / kPi) - 1.5 * (lx + l1x) - y * y / x -
                         (y - Y) * (y - Y) / (1.0 - x) + 2.0 * r.s() * y - 2.0 * r.v_t * Y;
  return std::exp(log_val) / fp_norm(r);
}

double fp_min_end_pdf(const RescaledParams& r, double y, double Y) {
  require(y <= 0.0 && Y >= y, "fp_min_end_pdf: requires y <= 0 and Y >= y");
  const double d = Y - 2.0 * y;
  return 4.0 * d * kInvSqrtPi * std::exp(-d * d + 2.0 * r.s() * y - 2.0 * r.v_t * Y) / fp_norm(r);
}

double absorbing_propagator(double p, double q, double dt) {
  if (p <= 0.0 || q <= 0.0) return 0.0;
  const double d = p - q;
  return std::exp(-d * d / dt) * -std::expm1(-4.0 * p * q / dt) / std::sqrt(kPi * dt);
}

double fp_multipoint_pdf(const RescaledParams& r, const std::vector<double>& points,
                         const std::vector<double>& values, double end_value) {
  require(points.size() == values.size(), "fp_multipoint_pdf: points and values differ in length");
  if (points.empty()) return fp_pdf_Y(r, end_value);
  std::vector<double> xs{0.0}, Xs{0.0};
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(points[i] > xs.back() && points[i] < 1.0, "fp_multipoint_pdf: points must increase in (0, 1)");
    xs.push_back(points[i]);
    Xs.push_back(values[i]);
  }
  xs.push_back(1.0);
  Xs.push_back(end_value);
  const double bmax = *std::min_element(Xs.begin(), Xs.end());
  const std::size_t nseg = xs.size() - 1;
  const double s = r.s();

  auto product = [&](double b) {
    double acc = 1.0;
    for (std::size_t j = 0; j < nseg; ++j)
      acc *= absorbing_propagator(Xs[j + 1] - b, Xs[j] - b, xs[j + 1] - xs[j]);
    return acc;
  };
  auto minus_db_product = [&](double b) {
    double total = 0.0;
    for (std::size_t j = 0; j < nseg; ++j) {
      double term = dG_db(Xs[j + 1] - b, Xs[j] - b, xs[j + 1] - xs[j]);
      for (std::size_t i = 0; i < nseg && term != 0.0; ++i)
        if (i != j) term *= absorbing_propagator(Xs[i + 1] - b, Xs[i] - b, xs[i + 1] - xs[i]);
      total += term;
    }
    return total;
  };
  QuadOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-11;
  double integral;
  if (s > 0.0) {
    auto f = [&](double b) { return std::exp(2.0 * s * b) * product(b); };
    integral = 2.0 * s * require_converged(integrate_adaptive(f, Domain{-INFINITY, bmax}, opt), "fp_multipoint_pdf").value;
  } else {
    auto f = [&](double b) {
      const double d = minus_db_product(b);
      return d == 0.0 ? 0.0 : std::exp(2.0 * s * b) * d;
    };
    integral = require_converged(integrate_adaptive(f, Domain{-INFINITY, bmax}, opt), "fp_multipoint_pdf").value;
  }
  return integral * std::exp(-2.0 * r.v_t * end_value) / fp_norm(r);
}

double ew_mean_profile(const RescaledParams& r, double x_t) {
  require(x_t >= 0.0 && x_t <= 1.0, "ew_mean_profile: x_t must lie in [0, 1]");
  return r.u_t * x_t - 0.5 * r.s() * x_t * x_t;
}

double gamma_expectation(double b, double a, double xi, double c) {
  require(b > 0.0 && a >= 0.0 && xi > 0.0, "gamma_expectation: requires b > 0, a >= 0, xi > 0");
  QuadOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-12;
  if (b < 1.0) {
    // r = t^{1/b} removes the r^{b-1} endpoint singularity
    auto f = [&](double t) {
      if (t <= 0.0) return std::pow(xi, -c);
      const double r = std::pow(t, 1.0 / b);
      return std::exp(-r - c * std::log(a * r + xi));
    };
    const QuadResult q = require_converged(integrate_adaptive(f, Domain::semi_infinite(0.0), opt), "gamma_expectation");
    return q.value / std::exp(log_gamma(b + 1.0));
  }
  auto f = [&](double r) {
    if (r <= 0.0) return b == 1.0 ? std::pow(xi, -c) : 0.0;
    return std::exp((b - 1.0) * std::log(r) - r - c * std::log(a * r + xi) - log_gamma(b));
  };
  return require_converged(integrate_adaptive(f, Domain::semi_infinite(0.0), opt), "gamma_expectation").value;
}

double delta_limit(const ModelParams& p, double a, double xi, double x) {
  require(a >= 0.0 && xi > 0.0 && x >= 0.0, "delta_limit: requires a >= 0, xi > 0, x >= 0");
  const double u = p.u, v = p.v;
  if (u > 0.0 && v >= 0.0)
    return std::exp(v * v * x) * std::pow(xi, -v) * gamma_expectation(u, a, xi, u);
  if (u <= 0.0 && u <= v) return std::exp((v * v - u * u) * x) * std::pow(xi, -(u + v));
  if (v <= 0.0 && v < u) return gamma_expectation(u - v, a, xi, u + v);
  throw DomainError("delta_limit: parameters outside the three regions");
}

}  // namespace kpz
