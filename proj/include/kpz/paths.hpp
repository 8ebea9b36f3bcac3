#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "kpz/error.hpp"
#include "kpz/parallel.hpp"
#include "kpz/params.hpp"
#include "kpz/rng.hpp"

namespace kpz {

/// Values of a process on the uniform grid x_i = i L / n, i = 0..n, with X(0) = 0.
template <typename Scalar>
struct BasicPath {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Scalar L = Scalar(1);
  Vector values;

  BasicPath() = default;
  BasicPath(Scalar length, Vector v) : L(length), values(std::move(v)) {}
  BasicPath(Scalar length, Eigen::Index n_steps) : L(length), values(Vector::Zero(n_steps + 1)) {}

  Eigen::Index n_steps() const { return values.size() - 1; }
  Scalar dx() const { return L / Scalar(n_steps()); }
  Scalar x(Eigen::Index i) const { return L * Scalar(i) / Scalar(n_steps()); }
  Scalar end() const { return values(values.size() - 1); }
  Scalar min() const { return values.minCoeff(); }
  Eigen::Index argmin() const {
    Eigen::Index i;
    values.minCoeff(&i);
    return i;
  }
};

using Path = BasicPath<double>;

/// Paths stored column-wise with importance log-weights.
struct WeightedEnsemble {
  double L = 1.0;
  Eigen::MatrixXd values;  ///< (n_steps + 1) x count
  Eigen::VectorXd log_weights;
  ModelParams params;
  RescaledParams rescaled;
  bool is_rescaled = false;

  Eigen::Index count() const { return values.cols(); }
  Eigen::Index n_steps() const { return values.rows() - 1; }
  Path path(Eigen::Index j) const { return Path(L, values.col(j)); }
};

// ---------------------------------------------------------------------------
// Functionals on grid values. They accept any Eigen column expression.

/// log ∫ e^{f(x)} dx by trapezoid, where f_i are given on a grid of step dx.
template <typename Derived>
typename Derived::Scalar log_trapezoid_exp(const Eigen::MatrixBase<Derived>& f, typename Derived::Scalar dx) {
  using S = typename Derived::Scalar;
  const Eigen::Index n = f.size() - 1;
  const S m = f.maxCoeff();
  const S sum = (f.array() - m).exp().sum() - S(0.5) * (std::exp(f(0) - m) + std::exp(f(n) - m));
  return m + std::log(dx * sum);
}

enum class ExpMode { automatic, direct, log_sum_exp };

/// Z = ∫_0^L e^{-2X(x) - 2 drift_shift x} dx by trapezoid. Direct summation
/// unless max(-2X) exceeds 300 or log_sum_exp is requested.
template <typename Scalar>
Scalar exp_functional(const BasicPath<Scalar>& p, Scalar drift_shift = Scalar(0), ExpMode mode = ExpMode::automatic) {
  const Eigen::Index n = p.n_steps();
  const auto xs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(n + 1, Scalar(0), p.L);
  const auto f = (Scalar(-2) * p.values - Scalar(2) * drift_shift * xs).eval();
  if (mode == ExpMode::log_sum_exp || (mode == ExpMode::automatic && f.maxCoeff() > Scalar(300)))
    return std::exp(log_trapezoid_exp(f, p.dx()));
  const auto e = f.array().exp();
  return p.dx() * (e.sum() - Scalar(0.5) * (e(0) + e(n)));
}

/// log Z, always through log-sum-exp.
template <typename Scalar>
Scalar log_exp_functional(const BasicPath<Scalar>& p, Scalar drift_shift = Scalar(0)) {
  const Eigen::Index n = p.n_steps();
  const auto xs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(n + 1, Scalar(0), p.L);
  return log_trapezoid_exp((Scalar(-2) * p.values - Scalar(2) * drift_shift * xs).eval(), p.dx());
}

/// 𝓔_{u,v}(X) = u log ∫e^{-2X} + v log ∫e^{2X(L) - 2X}.
template <typename Scalar>
Scalar energy(const BasicPath<Scalar>& p, const ModelParams& params) {
  const Scalar lz = log_exp_functional(p);
  return Scalar(params.u) * lz + Scalar(params.v) * (Scalar(2) * p.end() + lz);
}

/// Energy written as the weight exponent (u+v) log Z + 2v X(L).
template <typename Scalar>
Scalar energy_weight_form(const BasicPath<Scalar>& p, const ModelParams& params) {
  return Scalar(params.w()) * log_exp_functional(p) + Scalar(2 * params.v) * p.end();
}

/// x ↦ X(L - x) - X(L).
template <typename Scalar>
BasicPath<Scalar> reversed(const BasicPath<Scalar>& p) {
  BasicPath<Scalar> r(p.L, p.values.reverse().eval());
  r.values.array() -= p.end();
  return r;
}

/// Log Radon-Nikodym weight 2(ũ+ṽ) min X - 2ṽ X(1) of the rescaled measure.
template <typename Scalar>
Scalar fp_log_weight(const BasicPath<Scalar>& p, const RescaledParams& r) {
  return Scalar(2 * r.s()) * p.min() - Scalar(2 * r.v_t) * p.end();
}

/// The same weight as 2ũ min X + 2ṽ (min X - X(1)).
template <typename Scalar>
Scalar fp_log_weight_symmetric(const BasicPath<Scalar>& p, const RescaledParams& r) {
  const Scalar m = p.min();
  return Scalar(2 * r.u_t) * m + Scalar(2 * r.v_t) * (m - p.end());
}

/// Running trapezoid log ∫_0^{x_i} e^{2X}; entry 0 is -inf.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> log_running_exp_integral(const BasicPath<Scalar>& p) {
  const Eigen::Index n = p.n_steps();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n + 1);
  out(0) = -std::numeric_limits<Scalar>::infinity();
  const Scalar lh = std::log(Scalar(0.5) * p.dx());
  for (Eigen::Index i = 1; i <= n; ++i) {
    const Scalar a = Scalar(2) * p.values(i - 1), b = Scalar(2) * p.values(i);
    const Scalar hi = std::max(a, b);
    const Scalar seg = lh + hi + std::log(std::exp(a - hi) + std::exp(b - hi));
    const Scalar prev = out(i - 1);
    out(i) = (i == 1) ? seg : std::max(prev, seg) + std::log1p(std::exp(-std::abs(prev - seg)));
  }
  return out;
}

/// T_z(X)(t) = X(t) - log(1 + z ∫_0^t e^{2X}).
template <typename Scalar>
BasicPath<Scalar> t_transform(const BasicPath<Scalar>& p, Scalar z) {
  if (z == Scalar(0)) return p;
  const auto li = log_running_exp_integral(p);
  BasicPath<Scalar> out = p;
  const Scalar lz = std::log(std::abs(z));
  for (Eigen::Index i = 1; i <= p.n_steps(); ++i) {
    const Scalar t = lz + li(i);
    Scalar shift;
    if (z > Scalar(0)) {
      shift = t > Scalar(30) ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
    } else {
      if (t >= Scalar(0)) throw DomainError("t_transform: 1 + z·∫e^{2X} is not positive");
      shift = std::log1p(-std::exp(t));
    }
    out.values(i) = p.values(i) - shift;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generators.

/// Brownian motion with the given drift and diffusion coefficient (variance diffusion·x).
Path sample_brownian(double L, Eigen::Index n, double drift, double diffusion, Stream& rng);

/// Bridge from 0 to endpoint over [0, L]; covariance diffusion·(min(s,t) - st/L).
Path sample_bridge(double L, Eigen::Index n, double endpoint, Stream& rng, double diffusion = 1.0);

/// Minimum of a diffusion-1/2 bridge from a to b over a time step dt.
double sample_bridge_min(double a, double b, double dt, Stream& rng);

/// Standard excursion on [0, 1] by cyclic shift of a unit bridge around its minimum.
Path sample_excursion(Eigen::Index n, Stream& rng);

/// Standard meander on [0, 1]: norm of a 3D bridge to (R, 0, 0), R Rayleigh.
Path sample_meander(Eigen::Index n, Stream& rng);

/// Half-line Hariya-Yor process for u > 0 (diffusion 1/2 per Brownian).
/// With include_b1 = false the B⁽¹⁾ summand is dropped.
Path sample_hy_max_current(double u, double x_max, Eigen::Index n, Stream& rng, bool include_b1 = true);
Path sample_hy_high_density(double u, double v, double x_max, Eigen::Index n, Stream& rng, bool include_b1 = true);

enum class HalfLineRegion { max_current, high_density, low_density };

/// Large-scale half-line limits with an exponential variable and a running minimum.
Path sample_fp_halfline(const RescaledParams& r, HalfLineRegion region, double y_max, Eigen::Index n, Stream& rng);

/// Parabola ũx̃ - (ũ+ṽ)x̃²/2 plus noise: W/√2 for the X̃ process, W for the height.
Path sample_ew_limit(const RescaledParams& r, Eigen::Index n, Stream& rng, bool height = false);

/// Independent paths from a generator, one split stream per column.
template <typename Generator>
Eigen::MatrixXd sample_columns(Eigen::Index count, Eigen::Index n_steps, const Stream& root, Generator&& gen) {
  Eigen::MatrixXd out(n_steps + 1, count);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t j) {
    Stream s = root.split(j);
    out.col(static_cast<Eigen::Index>(j)) = gen(s).values;
  });
  return out;
}

}  // namespace kpz
