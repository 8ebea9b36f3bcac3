#pragma once

#include <vector>

#include "kpz/params.hpp"

namespace kpz {

/// Largest n handled by the u+v = -n family.
inline constexpr int kMaxFamilyOrder = 6;

/// Normalization 𝒵_{u,v,L}. Closed forms for u+v = 0, (u,v) = (1/2, 0) and
/// u+v = -n with n <= 6; u+v = 1 is normalized by quadrature. The alternating
/// sum of the u+v = -n family cancels badly when L is small (L < 0.5 for n >= 3).
double norm_Z(const ModelParams& p);
double log_norm_Z(const ModelParams& p);

/// Density of Y = X(L) for u+v ∈ {0, 1, -1, ..., -6}.
double pdf_Y(const ModelParams& p, double Y);

/// Generic u+v = -n density through the one-dimensional r integral.
double pdf_Y_integral(const ModelParams& p, double Y);

/// Cumulants of X(L) on the line u+v = -1. Orders 1 and 2 are closed form;
/// higher orders use Richardson-extrapolated differences of log 𝒵.
double cumulant_Y(const ModelParams& p, int order);

/// E[X(x)] on the line u+v = -1.
double mean_profile(const ModelParams& p, double x);

/// Critical-regime profile ⟨X(x̃L)⟩/L for ṽ = L(v + 1/2).
double scaling_profile(double v_t, double x_t);

/// E[Z_L^k] = 𝒵_{u-k,v}/𝒵_{u,v}.
double moment_Z(const ModelParams& p, double k);

/// E[exp(-c X(L))] for u, v > 0 from the k-integral I(c)/I(0).
double laplace_finite(const ModelParams& p, double c);

/// L → ∞ limit Γ(c/2+v)²Γ(u-c/2)²/(Γ(v)²Γ(u)²).
double laplace_limit(double u, double v, double c);

/// Normalization Z̃ of the rescaled measure.
double fp_norm(const RescaledParams& r);

/// Density of X̃(1) under the rescaled measure, for any ũ, ṽ.
double fp_pdf_Y(const RescaledParams& r, double Y);

/// E[exp(-c X̃(1))] for ũ, ṽ > 0 and -2ṽ < c < 2ũ.
double fp_laplace(const RescaledParams& r, double c);

/// F(a, b) = ∫_0^∞ e^{-k²/4} k² / ((k²+a²)(k²+b²)) dk for a, b > 0.
double fp_F(double a, double b);

/// Joint density of (min, argmin, X̃(1)) at (y, x, Y).
double fp_joint_min_pdf(const RescaledParams& r, double y, double x, double Y);

/// Joint density of (min, X̃(1)) at (y, Y).
double fp_min_end_pdf(const RescaledParams& r, double y, double Y);

/// Joint density of X̃ at interior points x_1 < ... < x_m in (0, 1) and at 1.
double fp_multipoint_pdf(const RescaledParams& r, const std::vector<double>& points,
                         const std::vector<double>& values, double end_value);

/// Absorbing-wall propagator G(p, q, Δ) for p, q > 0.
double absorbing_propagator(double p, double q, double dt);

/// Edwards-Wilkinson mean profile ũx̃ - (ũ+ṽ)x̃²/2.
double ew_mean_profile(const RescaledParams& r, double x_t);

/// L → ∞ limit of Δ(a, ξ, L - x)/Δ(0, 1, L).
double delta_limit(const ModelParams& p, double a, double xi, double x);

/// E[(aγ_b + ξ)^{-c}] for γ_b ~ Gamma(b, 1).
double gamma_expectation(double b, double a, double xi, double c);

}  // namespace kpz
