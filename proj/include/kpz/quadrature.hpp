#pragma once

#include <functional>
#include <limits>
#include <string>

namespace kpz {

struct QuadResult {
  double value = 0.0;
  double abs_err = 0.0;
  long evaluations = 0;
  bool converged = true;
};

/// Integration range; either end may be infinite.
struct Domain {
  double a;
  double b;

  static Domain finite(double a, double b) { return {a, b}; }
  static Domain semi_infinite(double a) { return {a, std::numeric_limits<double>::infinity()}; }
};

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (21 point) bisection. Infinite ends are mapped by
/// x = a + t/(1-t). The error estimate is the Kronrod-Gauss difference, summed
/// over subintervals. On exhaustion the partial result is returned with
/// converged = false.
QuadResult integrate_adaptive(const Integrand& f, Domain d, const QuadOptions& opt = {});
QuadResult integrate_adaptive(const Integrand& f, Domain d, double tol);

/// Tanh-sinh rule on a finite interval, refined by halving the step. Suited to
/// integrable endpoint singularities; points near a are evaluated as a + tiny
/// without cancellation.
QuadResult integrate_tanh_sinh(const Integrand& f, double a, double b, const QuadOptions& opt = {});

/// Throws QuadratureError when r did not converge.
const QuadResult& require_converged(const QuadResult& r, const std::string& what);

}  // namespace kpz
