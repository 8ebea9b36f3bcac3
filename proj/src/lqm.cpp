#include "kpz/lqm.hpp"

#include <cmath>
#include <numbers>

#include "kpz/error.hpp"
#include "kpz/specfun.hpp"

namespace kpz {

namespace {

constexpr double kPi = std::numbers::pi;

double log_sinh(double x) { return x + std::log(-std::expm1(-2.0 * x)) - std::log(2.0); }

/// Chain of blocks: each block carries one k variable, a Gaussian length and
/// (between consecutive blocks) a link with increment ds > 0.
struct Chain {
  std::vector<double> lengths;
  std::vector<double> links;
  int collapsed = 0;
};

Chain build_chain(const std::vector<double>& points, const std::vector<double>& s, double L) {
  const std::size_t m = points.size();
  require(s.size() == m, "laplace query: points and s must have equal length");
  require(m >= 1, "laplace query: at least one point required");
  double prev = 0.0;
  for (double x : points) {
    require(x > prev && x < L, "laplace query: points must be increasing and interior");
    prev = x;
  }
  for (std::size_t j = 0; j + 1 < m; ++j)
    require(s[j] >= s[j + 1], "laplace query: s must be nonincreasing");
  require(s[m - 1] >= 0.0, "laplace query: s_m must be nonnegative");

  Chain c;
  double start = 0.0;
  for (std::size_t j = 0; j <= m; ++j) {
    const double end = j < m ? points[j] : L;
    const double ds = j < m ? s[j] - (j + 1 < m ? s[j + 1] : 0.0) : 0.0;
    if (j == m || ds > 0.0) {
      c.lengths.push_back(end - start);
      if (j < m) c.links.push_back(ds);
      start = end;
    } else {
      ++c.collapsed;
    }
  }
  return c;
}

double cutoff(double length) { return 1.2 * std::sqrt(166.0 / length) + 1.0; }

/// Generic nested integral over the chain. block(b, k) gives the log of all
/// single-k factors of block b; link(b, k, kp, delta) gives the log of the link
/// between blocks b and b+1 with |k - kp| = delta passed exactly.
template <typename Block, typename Link>
QuadResult chain_integral(const Chain& c, Block block, Link link, const LqmOptions& opt) {
  const int nb = static_cast<int>(c.lengths.size());
  require(nb - 1 <= opt.max_depth, "laplace_J: more than max_depth non-collapsed links");
  QuadOptions outer;
  outer.rel_tol = opt.rel_tol;
  outer.abs_tol = 0.0;
  QuadOptions inner = outer;
  inner.rel_tol = opt.rel_tol * 0.1;
  inner.abs_tol = 1e-300;
  long evals = 0;
  bool converged = true;

  // Integral over k_b given k_{b-1} and the accumulated log weight.
  std::function<double(int, double)> integrate_from = [&](int b, double kprev) -> double {
    const double kmax = cutoff(c.lengths[b]);
    auto eval = [&](double k, double delta) {
      double lf = block(b, k) + link(b - 1, kprev, k, delta);
      double rest = b + 1 < nb ? integrate_from(b + 1, k) : 1.0;
      ++evals;
      return rest > 0.0 ? std::exp(lf) * rest : 0.0;
    };
    double total = 0.0;
    if (kprev > 0.0) {
      auto below = [&](double k) { return eval(k, kprev - k); };
      auto r1 = integrate_tanh_sinh(below, 0.0, kprev, inner);
      converged = converged && r1.converged;
      total += r1.value;
    }
    if (kmax > kprev) {
      auto above = [&](double d) { return eval(kprev + d, d); };
      auto r2 = integrate_tanh_sinh(above, 0.0, kmax - kprev, inner);
      converged = converged && r2.converged;
      total += r2.value;
    }
    return total;
  };

  auto outer_f = [&](double k) {
    if (k <= 0.0) return 0.0;
    const double lf = block(0, k);
    const double rest = nb > 1 ? integrate_from(1, k) : 1.0;
    ++evals;
    return rest > 0.0 ? std::exp(lf) * rest : 0.0;
  };
  QuadResult r = integrate_adaptive(outer_f, Domain::finite(0.0, cutoff(c.lengths[0])), outer);
  r.evaluations = evals;
  r.converged = r.converged && converged;
  return r;
}

}  // namespace

double lqm_norm_sq(double k) {
  return 2.0 * std::exp(std::log(k) + log_sinh(kPi * k)) / (kPi * kPi);
}

QuadResult laplace_J(const LaplaceQuery& q, const LqmOptions& opt) {
  const auto& p = q.params;
  require(p.u > 0.0 && p.v > 0.0, "laplace_J: requires u, v > 0");
  require(q.s.empty() || q.s[0] < 2.0 * p.u, "laplace_J: requires s_1 < 2u");
  const Chain c = build_chain(q.points, q.s, p.L);
  const int nb = static_cast<int>(c.lengths.size());
  const double left = p.u - 0.5 * q.s[0];
  const double log_w_const = -std::log(4.0 * kPi * kPi);

  auto block = [&](int b, double k) {
    double lf = std::log(k) + log_sinh(kPi * k) + log_w_const - 0.25 * k * k * c.lengths[b];
    if (b == 0) lf += 2.0 * log_abs_gamma(left, 0.5 * k);
    if (b == nb - 1) lf += 2.0 * log_abs_gamma(p.v, 0.5 * k);
    return lf;
  };
  auto link = [&](int b, double k, double kp, double delta) {
    if (b < 0) return 0.0;
    const double a = 0.5 * c.links[b];
    return 2.0 * (log_abs_gamma(a, 0.5 * (k + kp)) + log_abs_gamma(a, 0.5 * delta)) -
           log_gamma(c.links[b]);
  };
  QuadResult r = chain_integral(c, block, link, opt);
  const double pref = 0.5 * 2.0 / std::exp(log_gamma(p.u + p.v));
  r.value *= pref;
  r.abs_err *= pref;
  return r;
}

double laplace_J_ratio(const LaplaceQuery& q, const LqmOptions& opt) {
  LaplaceQuery zero = q;
  std::fill(zero.s.begin(), zero.s.end(), 0.0);
  const QuadResult num = require_converged(laplace_J(q, opt), "laplace_J");
  const QuadResult den = require_converged(laplace_J(zero, opt), "laplace_J");
  return num.value / den.value;
}

double laplace_height(const LaplaceQuery& q, const LqmOptions& opt) {
  double gauss = 0.0;
  double prev = 0.0;
  for (std::size_t j = 0; j < q.points.size(); ++j) {
    gauss += q.s[j] * q.s[j] * (q.points[j] - prev);
    prev = q.points[j];
  }
  return std::exp(0.25 * gauss) * laplace_J_ratio(q, opt);
}

QuadResult laplace_J_fp(const LaplaceQueryFP& q, const LqmOptions& opt) {
  const auto& p = q.params;
  require(q.s.empty() || q.s[0] < 2.0 * p.u_t, "laplace_J_fp: requires s_1 < 2 u_t");
  require(p.v_t > 0.0, "laplace_J_fp: requires v_t > 0");
  const Chain c = build_chain(q.points, q.s, 1.0);
  const int nb = static_cast<int>(c.lengths.size());
  const double left = 2.0 * p.u_t - q.s[0];
  const double right = 2.0 * p.v_t;

  auto block = [&](int b, double k) {
    double lf = 2.0 * std::log(k) - std::log(4.0 * kPi) - 0.25 * k * k * c.lengths[b];
    if (b == 0) lf -= std::log(left * left + k * k);
    if (b == nb - 1) lf -= std::log(right * right + k * k);
    return lf;
  };
  auto link = [&](int b, double k, double kp, double delta) {
    if (b < 0) return 0.0;
    const double ds = c.links[b];
    return std::log(ds) - std::log(ds * ds + (k + kp) * (k + kp)) - std::log(ds * ds + delta * delta);
  };
  QuadResult r = chain_integral(c, block, link, opt);
  const double pref = std::pow(1.0 / 16.0, c.collapsed);
  r.value *= pref;
  r.abs_err *= pref;
  return r;
}

double laplace_J_fp_ratio(const LaplaceQueryFP& q, const LqmOptions& opt) {
  LaplaceQueryFP zero = q;
  std::fill(zero.s.begin(), zero.s.end(), 0.0);
  const QuadResult num = require_converged(laplace_J_fp(q, opt), "laplace_J_fp");
  const QuadResult den = require_converged(laplace_J_fp(zero, opt), "laplace_J_fp");
  return num.value / den.value;
}

double IdentityCheck::rel_err() const { return std::abs(lhs - rhs) / std::abs(rhs); }

IdentityCheck verify_matrix_element(double alpha, double k, double kp) {
  require(alpha > 0.0 && k > 0.0 && kp > 0.0, "verify_matrix_element: alpha, k, k' must be positive");
  const double norm = std::sqrt(lqm_norm_sq(k) * lqm_norm_sq(kp));
  // r = e^{-U}: ∫ r^{2α-1} K K dr = ∫ e^{-2αU} K(2e^{-U}) K'(2e^{-U}) dU
  auto f = [&](double U) {
    const double x = 2.0 * std::exp(-U);
    return std::exp(-2.0 * alpha * U) * bessel_k_imag(k, x) * bessel_k_imag(kp, x);
  };
  QuadOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-10;
  opt.max_subdivisions = 5000;
  const double u_hi = 20.0 / alpha;
  const QuadResult r =
      require_converged(integrate_adaptive(f, Domain::finite(-3.5, u_hi), opt), "verify_matrix_element");
  const double rhs = norm * gamma4(alpha, 0.5 * k, 0.5 * kp) / (8.0 * std::exp(log_gamma(2.0 * alpha)));
  return {norm * r.value, rhs};
}

IdentityCheck verify_id1(double w, double k) {
  require(w > 0.0 && k > 0.0, "verify_id1: w and k must be positive");
  const double nk = std::sqrt(lqm_norm_sq(k));
  auto f = [&](double U) { return std::exp(-2.0 * w * U) * bessel_k_imag(k, 2.0 * std::exp(-U)); };
  QuadOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-10;
  opt.max_subdivisions = 5000;
  const QuadResult r =
      require_converged(integrate_adaptive(f, Domain::finite(-3.5, 20.0 / w), opt), "verify_id1");
  return {nk * r.value, 0.25 * nk * abs_gamma_sq(w, 0.5 * k)};
}

}  // namespace kpz
