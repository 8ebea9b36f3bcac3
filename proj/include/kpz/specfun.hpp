#pragma once

namespace kpz {

struct SpecFunConfig {
  double rel_tol = 1e-12;
  int max_terms = 200;
  bool quadrature_fallback = true;
};

double erf(double x);
double erfc(double x);
/// Scaled complementary error function e^{x²} erfc(x).
double erfcx(double x);

/// log Γ(x) for x > 0.
double log_gamma(double x);
/// log|Γ(a+ib)|; throws at the poles b=0, a ∈ {0,-1,-2,...}.
double log_abs_gamma(double a, double b);
/// |Γ(a+ib)|².
double abs_gamma_sq(double a, double b);
/// log of Γ(α+ix+iy)Γ(α+ix-iy)Γ(α-ix+iy)Γ(α-ix-iy), α > 0.
double log_gamma4(double alpha, double x, double y);
double gamma4(double alpha, double x, double y);

/// (e^x - 1)/x, equal to 1 at x = 0.
double exprel(double x);
double log_exprel(double x);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
/// Standard normal CDF.
double normal_cdf(double x);

struct BesselKResult {
  double value;
  bool accurate;  ///< false in the oscillatory regime x < ν/50
};

/// K_{iν}(x) for ν ≥ 0, x > 0, from the cosine-cosh integral.
double bessel_k_imag(double nu, double x, const SpecFunConfig& cfg = {});
BesselKResult bessel_k_imag_checked(double nu, double x, const SpecFunConfig& cfg = {});

}  // namespace kpz
