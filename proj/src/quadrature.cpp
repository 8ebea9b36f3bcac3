#include "kpz/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "kpz/error.hpp"

namespace kpz {

namespace {

constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525116220, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, err;
  bool operator<(const Segment& o) const { return err < o.err; }
};

Segment gk21(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * kWgk[10];
  double rg = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    rk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, rk * h, std::abs((rk - rg) * h)};
}

}  // namespace

QuadResult integrate_adaptive(const Integrand& f, Domain d, const QuadOptions& opt) {
  require(!(d.a > d.b), "integrate_adaptive: reversed domain");
  const bool inf_a = std::isinf(d.a);
  const bool inf_b = std::isinf(d.b);
  Integrand g;
  double lo = d.a, hi = d.b;
  if (inf_a && inf_b) {
    g = [&f](double t) {
      const double s = 1.0 - t * t;
      return f(t / s) * (1.0 + t * t) / (s * s);
    };
    lo = -1.0;
    hi = 1.0;
  } else if (inf_b) {
    g = [&f, a = d.a](double t) {
      const double s = 1.0 - t;
      return f(a + t / s) / (s * s);
    };
    lo = 0.0;
    hi = 1.0;
  } else if (inf_a) {
    g = [&f, b = d.b](double t) {
      const double s = 1.0 - t;
      return f(b - t / s) / (s * s);
    };
    lo = 0.0;
    hi = 1.0;
  } else {
    g = f;
  }

  QuadResult r;
  std::priority_queue<Segment> heap;
  Segment first = gk21(g, lo, hi);
  r.evaluations = 21;
  heap.push(first);
  double total = first.value;
  double err = first.err;
  int subdivisions = 0;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (subdivisions >= opt.max_subdivisions) {
      r.converged = false;
      break;
    }
    Segment s = heap.top();
    heap.pop();
    const double mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b)) {
      r.converged = false;
      heap.push(s);
      break;
    }
    Segment left = gk21(g, s.a, mid);
    Segment right = gk21(g, mid, s.b);
    r.evaluations += 42;
    total += left.value + right.value - s.value;
    err += left.err + right.err - s.err;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Recompute sums to avoid drift from incremental updates.
  double v = 0.0, e = 0.0;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().err;
    heap.pop();
  }
  r.value = v;
  r.abs_err = e;
  if (!std::isfinite(v)) r.converged = false;
  return r;
}

QuadResult integrate_adaptive(const Integrand& f, Domain d, double tol) {
  QuadOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = tol;
  return integrate_adaptive(f, d, opt);
}

QuadResult integrate_tanh_sinh(const Integrand& f, double a, double b, const QuadOptions& opt) {
  require(a <= b && std::isfinite(a) && std::isfinite(b), "integrate_tanh_sinh: finite a <= b required");
  QuadResult r;
  if (a == b) return r;
  constexpr double half_pi = 0.5 * std::numbers::pi;
  constexpr double tmax = 4.0;
  const double width = b - a;

  // Contribution of the symmetric node pair at t (or the centre when t == 0).
  auto pair = [&](double t) {
    const double s = half_pi * std::sinh(t);
    const double e = std::exp(-2.0 * std::abs(s));
    const double q = e / (1.0 + e);  // distance to nearest end, in units of width
    const double ch = std::cosh(s);
    const double w = 0.5 * width * half_pi * std::cosh(t) / (ch * ch);
    if (t == 0.0) return w * f(a + 0.5 * width);
    const double xl = a + width * q;
    const double xr = b - width * q;
    double acc = 0.0;
    if (xl > a) acc += f(xl);
    if (xr < b) acc += f(xr);
    return w * acc;
  };

  double h = 1.0;
  double sum = pair(0.0);
  for (double t = h; t <= tmax; t += h) sum += pair(t);
  r.evaluations = 1 + 2 * static_cast<long>(tmax / h);
  double estimate = sum * h;
  double prev = estimate;
  double diff = 0.0;
  for (int level = 1; level <= 12; ++level) {
    h *= 0.5;
    for (double t = h; t <= tmax; t += 2.0 * h) sum += pair(t);
    r.evaluations += 2 * static_cast<long>(tmax / (2.0 * h) + 1);
    estimate = sum * h;
    diff = std::abs(estimate - prev);
    prev = estimate;
    if (level >= 3 && diff <= std::max(opt.abs_tol, opt.rel_tol * std::abs(estimate))) {
      r.value = estimate;
      r.abs_err = diff;
      return r;
    }
  }
  r.value = estimate;
  r.abs_err = diff;
  r.converged = false;
  return r;
}

const QuadResult& require_converged(const QuadResult& r, const std::string& what) {
  if (!r.converged) throw QuadratureError(what + ": quadrature did not converge", r.value, r.abs_err);
  return r;
}

}  // namespace kpz
