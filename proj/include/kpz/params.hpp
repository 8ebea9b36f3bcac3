#pragma once

#include <string>

namespace kpz {

/// Boundary parameters (u at x=0, v at x=L) and interval length.
struct ModelParams {
  double u = 0.0;
  double v = 0.0;
  double L = 1.0;

  double w() const { return u + v; }
};

/// Rescaled boundary parameters of the large-L limit, u = ũ/√L, v = ṽ/√L.
struct RescaledParams {
  double u_t = 0.0;
  double v_t = 0.0;

  double s() const { return u_t + v_t; }
};

enum class Phase { maximal_current, high_density, low_density, boundary };

/// Phase of (u,v): maximal current u,v>0; high density v<0,u>v; low density u<0,u<v.
/// The lines u=v<0, u=0, v=0 are reported as boundary.
Phase phase_of(double u, double v);

std::string to_string(Phase p);

}  // namespace kpz
