#include "kpz/paths.hpp"

#include <cmath>

namespace kpz {

namespace {

Eigen::VectorXd brownian_values(double L, Eigen::Index n, double drift, double diffusion, Stream& rng) {
  const double dt = L / static_cast<double>(n);
  const double sd = std::sqrt(diffusion * dt);
  Eigen::VectorXd v(n + 1);
  v(0) = 0.0;
  for (Eigen::Index i = 1; i <= n; ++i) v(i) = v(i - 1) + drift * dt + sd * rng.gaussian();
  return v;
}

/// log(1 + g e^{t}) for t = log of a running integral.
double log1p_scaled(double log_g, double t) {
  const double a = log_g + t;
  return a > 30.0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a));
}

Path hy_process(double drift, double shape, double x_max, Eigen::Index n, Stream& rng, bool include_b1) {
  const double gamma = rng.gamma(shape);
  Path b2(x_max, brownian_values(x_max, n, 0.0, 0.5, rng));
  Path inner(x_max, n);
  for (Eigen::Index i = 0; i <= n; ++i) inner.values(i) = -b2.values(i) - drift * b2.x(i);
  const Eigen::VectorXd li = log_running_exp_integral(inner);
  const double lg = std::log(gamma);
  Path out(x_max, n);
  for (Eigen::Index i = 1; i <= n; ++i) out.values(i) = -inner.values(i) + log1p_scaled(lg, li(i));
  if (include_b1) out.values += brownian_values(x_max, n, 0.0, 0.5, rng);
  return out;
}

}  // namespace

Path sample_brownian(double L, Eigen::Index n, double drift, double diffusion, Stream& rng) {
  require(n >= 2, "sample_brownian: n must be >= 2");
  require(L > 0.0 && diffusion > 0.0, "sample_brownian: L and diffusion must be positive");
  return Path(L, brownian_values(L, n, drift, diffusion, rng));
}

Path sample_bridge(double L, Eigen::Index n, double endpoint, Stream& rng, double diffusion) {
  Path p = sample_brownian(L, n, 0.0, diffusion, rng);
  const double shift = p.end() - endpoint;
  for (Eigen::Index i = 0; i <= n; ++i) p.values(i) -= shift * static_cast<double>(i) / static_cast<double>(n);
  p.values(n) = endpoint;
  return p;
}

Path sample_excursion(Eigen::Index n, Stream& rng) {
  const Path b = sample_bridge(1.0, n, 0.0, rng);
  const Eigen::Index k = b.argmin();
  Path e(1.0, n);
  for (Eigen::Index i = 0; i < n; ++i) e.values(i) = b.values((k + i) % n) - b.values(k);
  e.values(n) = 0.0;
  return e;
}

Path sample_meander(Eigen::Index n, Stream& rng) {
  require(n >= 2, "sample_meander: n must be >= 2");
  const double R = std::sqrt(2.0 * rng.exponential(1.0));
  Eigen::MatrixXd comps(n + 1, 3);
  for (int c = 0; c < 3; ++c) comps.col(c) = sample_bridge(1.0, n, c == 0 ? R : 0.0, rng).values;
  return Path(1.0, comps.rowwise().norm());
}

Path sample_hy_max_current(double u, double x_max, Eigen::Index n, Stream& rng, bool include_b1) {
  require(u > 0.0, "sample_hy_max_current: requires u > 0");
  require(n >= 2 && x_max > 0.0, "sample_hy_max_current: requires n >= 2 and x_max > 0");
  return hy_process(0.0, u, x_max, n, rng, include_b1);
}

Path sample_hy_high_density(double u, double v, double x_max, Eigen::Index n, Stream& rng, bool include_b1) {
  require(v <= 0.0 && u > v, "sample_hy_high_density: requires v <= 0 and u > v");
  require(n >= 2 && x_max > 0.0, "sample_hy_high_density: requires n >= 2 and x_max > 0");
  return hy_process(v, u - v, x_max, n, rng, include_b1);
}

double sample_bridge_min(double a, double b, double dt, Stream& rng) {
  const double d = b - a;
  return 0.5 * (a + b - std::sqrt(d * d - dt * std::log(rng.uniform())));
}

Path sample_fp_halfline(const RescaledParams& r, HalfLineRegion region, double y_max, Eigen::Index n, Stream& rng) {
  require(n >= 2 && y_max > 0.0, "sample_fp_halfline: requires n >= 2 and y_max > 0");
  double drift = 0.0;
  double rate = 0.0;
  switch (region) {
    case HalfLineRegion::max_current:
      require(r.u_t > 0.0, "sample_fp_halfline: max_current requires u_t > 0");
      rate = r.u_t;
      break;
    case HalfLineRegion::high_density:
      require(r.v_t < 0.0 && r.u_t > r.v_t, "sample_fp_halfline: high_density requires v_t < 0 and u_t > v_t");
      drift = r.v_t;
      rate = r.u_t - r.v_t;
      break;
    case HalfLineRegion::low_density:
      require(r.u_t <= 0.0, "sample_fp_halfline: low_density requires u_t <= 0");
      return sample_brownian(y_max, n, r.u_t, 1.0, rng);
  }
  const double e = rng.exponential(rate);
  Path out(y_max, brownian_values(y_max, n, drift, 0.5, rng));
  const double dt = out.dx();
  double running_min = 0.0;
  double prev = 0.0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    const double cur = out.values(i);
    running_min = std::min(running_min, sample_bridge_min(prev, cur, dt, rng));
    prev = cur;
    out.values(i) += std::max(0.0, -e - 2.0 * running_min);
  }
  out.values += brownian_values(y_max, n, 0.0, 0.5, rng);
  return out;
}

Path sample_ew_limit(const RescaledParams& r, Eigen::Index n, Stream& rng, bool height) {
  Path p = sample_brownian(1.0, n, 0.0, height ? 1.0 : 0.5, rng);
  for (Eigen::Index i = 0; i <= n; ++i) {
    const double x = p.x(i);
    p.values(i) += r.u_t * x - 0.5 * r.s() * x * x;
  }
  return p;
}

}  // namespace kpz
