#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kpz/params.hpp"
#include "kpz/paths.hpp"
#include "kpz/rng.hpp"
#include "kpz/stats.hpp"

namespace kpz {

/// One sampled path with the functionals most observables need. For the
/// rescaled measure min_value is the exact minimum of the piecewise bridge
/// and log_z is NaN.
struct Sample {
  const Path& path;
  double log_z;
  double min_value;
};

using Observable = std::function<double(const Sample&)>;

namespace obs {
Observable endpoint();
Observable endpoint_power(int k);
/// X at the grid point nearest to x.
Observable value_at(double x);
Observable z_power(double k);
Observable inverse_z();
Observable minimum();
Observable constant(double c = 1.0);
}  // namespace obs

enum class Method { is, mcmc, exact };
std::string to_string(Method m);

struct EstimateReport {
  double value = 0.0;
  double std_err = 0.0;
  double ess = 0.0;
  long n_total = 0;
  Method method = Method::is;
  std::uint64_t seed = 0;
  ModelParams params;
  RescaledParams rescaled;
  bool is_rescaled = false;
  bool degenerate = false;  ///< ess < 0.01 n_total
  double acceptance = 0.0;  ///< mcmc only
  double tau = 1.0;         ///< integrated autocorrelation time, mcmc only
  long burn_in = 0;
};

/// Observable values (rows = samples, cols = observables) with log-weights.
struct ObservableSamples {
  Eigen::MatrixXd values;
  Eigen::VectorXd log_weights;
};

/// Importance sampling on a Brownian base with drift base_drift and diffusion
/// 1/2. log w = -2vX(L) - (u+v) log Z - 2b X(L) + b²L, so E_base[w] = 𝒵.
ObservableSamples is_sample(const std::vector<Observable>& observables, const ModelParams& p, long n, int n_steps,
                            double base_drift, std::uint64_t seed);

enum class Normalization { self_normalized, unnormalized };

EstimateReport is_estimate(const Observable& o, const ModelParams& p, long n, int n_steps, double base_drift,
                           std::uint64_t seed, Normalization mode = Normalization::self_normalized);

/// Reduces weighted observable samples to a report for column col.
EstimateReport summarize(const ObservableSamples& s, Eigen::Index col, Normalization mode = Normalization::self_normalized);

struct McmcOptions {
  double beta = 0.0;  ///< 0 tunes β towards 25-40% acceptance
  int chains = 8;
  int thin = 1;
  long burn_in = -1;  ///< negative: 10 τ of X(L) from a pilot run, at least 100
};

struct McmcResult {
  Eigen::MatrixXd values;  ///< rows = recorded states, cols = observables; chains stacked
  double acceptance = 0.0;
  double beta = 0.0;
  double tau = 1.0;  ///< of X(L), averaged over chains
  Eigen::VectorXd tau_observables;  ///< per observable, averaged over chains
  long burn_in = 0;
  long nonfinite_rejections = 0;
};

/// Preconditioned Crank-Nicolson chains on the Brownian base with drift -v:
/// X' = μ + √(1-β²)(X - μ) + βξ, accepted with probability min(1, e^{-ΔE}),
/// E = (u+v) log Z.
McmcResult mcmc_sample(const std::vector<Observable>& observables, const ModelParams& p, long n_samples, int n_steps,
                       std::uint64_t seed, const McmcOptions& opt = {});

/// Recorded paths as a unit-weight ensemble.
WeightedEnsemble mcmc_chain(const ModelParams& p, long n_samples, int n_steps, double beta, std::uint64_t seed);

EstimateReport mcmc_estimate(const Observable& o, const ModelParams& p, long n_samples, int n_steps,
                             std::uint64_t seed, const McmcOptions& opt = {});

/// Exact sampler for u+v = -1: the argmin-type point x* has density ∝ e^{(1+2v)x},
/// and given x* the path is Brownian with drift -(v+1) before x* and -v after.
Path sample_stationary_exact(const ModelParams& p, int n_steps, Stream& rng);

ObservableSamples exact_sample(const std::vector<Observable>& observables, const ModelParams& p, long n, int n_steps,
                               std::uint64_t seed);

/// Importance sampling of the rescaled measure on [0, 1]; log w = 2(ũ+ṽ) min X - 2ṽ X(1)
/// with the continuous minimum drawn exactly between grid points.
ObservableSamples fp_is_sample(const std::vector<Observable>& observables, const RescaledParams& r, long n,
                               int n_steps, std::uint64_t seed);

EstimateReport fp_is_estimate(const Observable& o, const RescaledParams& r, long n, int n_steps, std::uint64_t seed,
                              Normalization mode = Normalization::self_normalized);

/// -½ log(γ_v γ_v' / (γ_u γ_u')), the L → ∞ law of X(L) for u, v > 0.
double sample_limit_endpoint(double u, double v, Stream& rng);

struct DeltaLimitPoint {
  double L = 0.0;
  double estimate = 0.0;
  double std_err = 0.0;
  double error = 0.0;
};

struct DeltaLimitReport {
  double limit = 0.0;
  Method method = Method::is;
  std::vector<DeltaLimitPoint> points;
  bool monotone = false;
};

/// E_stationary[(a/Z_L + ξ)^{-(u+v)}] = Δ(a,ξ,L)/Δ(0,1,L) at x = 0 against the
/// L → ∞ limit. Estimator: exact sampler on u+v = -1, importance sampling with
/// common random numbers across L when v < 0, otherwise MCMC.
DeltaLimitReport verify_delta_limit(double a, double xi, const ModelParams& p, const std::vector<double>& L_seq,
                                    long n, double steps_per_unit, std::uint64_t seed);

struct IdelawReport {
  ComparisonReport process;  ///< two-sample KS at time t
  ComparisonReport scalar;   ///< KS of 1/∫e^{2B_μ} against 2γ_{-μ}
  long truncation_warnings = 0;
  bool passed = false;
};

/// Identity in law for standard Brownian motion with drift μ < 0:
/// T_{2γ}(B_{-μ})(t) against B_μ(t), and 1/∫_0^T e^{2B_μ} against 2γ_{-μ}.
IdelawReport verify_idelaw(double mu, double t, long n, int n_steps, std::uint64_t seed, double horizon = 30.0,
                           double scalar_dt = 0.01);

struct EndpointRatioSamples {
  Eigen::VectorXd log_ratio;  ///< √(L/2) G + Y
  Eigen::VectorXd Y;
  Method method = Method::exact;
};

/// Samples of log 𝒬(L)/𝒬(0). Y comes from the exact sampler on u+v = -1 and
/// from MCMC otherwise.
EndpointRatioSamples endpoint_ratio_samples(const ModelParams& p, long n, int n_steps, std::uint64_t seed);

}  // namespace kpz
