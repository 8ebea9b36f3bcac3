#pragma once

#include <vector>

#include "kpz/params.hpp"
#include "kpz/quadrature.hpp"

namespace kpz {

/// Multipoint Laplace query: interior points 0 < x_1 < ... < x_m < L and
/// parameters s_1 >= ... >= s_m >= 0 (s_{m+1} = 0 implied).
struct LaplaceQuery {
  std::vector<double> points;
  std::vector<double> s;
  ModelParams params;
};

/// Rescaled (hard-wall) query on [0, 1].
struct LaplaceQueryFP {
  std::vector<double> points;
  std::vector<double> s;
  RescaledParams params;
};

struct LqmOptions {
  double rel_tol = 1e-9;
  int max_depth = 2;  ///< largest supported m
};

/// J(s) = 2/Γ(u+v) · J̃(s), the chain integral over k_1..k_{m+1} with Γ₄ links,
/// boundary factors |Γ(u - s_1/2 + ik_1/2) Γ(v + ik_{m+1}/2)|² and Gaussian
/// propagators. Links with equal consecutive s collapse to the identity.
QuadResult laplace_J(const LaplaceQuery& q, const LqmOptions& opt = {});

/// J(s)/J(0), i.e. E[exp(-Σ s_j (X(x_j) - X(x_{j-1})))] for the process X.
double laplace_J_ratio(const LaplaceQuery& q, const LqmOptions& opt = {});

/// Multipoint transform of the height H = W/√2 + X.
double laplace_height(const LaplaceQuery& q, const LqmOptions& opt = {});

/// Hard-wall analogue Ĵ(s̃) with k²/(4π) measures and rational links.
QuadResult laplace_J_fp(const LaplaceQueryFP& q, const LqmOptions& opt = {});
double laplace_J_fp_ratio(const LaplaceQueryFP& q, const LqmOptions& opt = {});

/// N_k² = 2/(π|Γ(ik)|²) = 2k sinh(πk)/π².
double lqm_norm_sq(double k);

struct IdentityCheck {
  double lhs;
  double rhs;
  double rel_err() const;
};

/// Bessel-moment integral N_k N_k' ∫ r^{2α-1} K_{ik}(2r) K_{ik'}(2r) dr against
/// N_k N_k' Γ₄(α ± ik/2 ± ik'/2) / (8 Γ(2α)).
IdentityCheck verify_matrix_element(double alpha, double k, double kp);

/// N_k ∫ e^{-2wU} K_{ik}(2e^{-U}) dU against (N_k/4) |Γ(w + ik/2)|².
IdentityCheck verify_id1(double w, double k);

}  // namespace kpz
