#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace kpz {

using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

struct ComparisonReport {
  double statistic = 0.0;
  double threshold = 0.0;
  bool passed = false;
  double n_effective = 0.0;
  std::string notes;
};

/// Kish effective sample size (Σw)²/Σw² from log-weights.
double effective_sample_size(const VectorRef& log_weights);

/// Weights normalized to sum 1, computed stably from log-weights.
Eigen::VectorXd normalized_weights(const VectorRef& log_weights);

struct WeightedMean {
  double value = 0.0;
  double std_err = 0.0;
  double ess = 0.0;
};

/// Self-normalized mean with delta-method standard error.
WeightedMean weighted_mean(const VectorRef& samples, const VectorRef& log_weights);

/// sup|F_emp - F| against an analytic CDF. The pass threshold is
/// coefficient/√n_eff (1.95 corresponds to the 0.001 level).
ComparisonReport ks_one_sample(const VectorRef& samples, const VectorRef& weights,
                               const std::function<double(double)>& cdf, double coefficient = 1.95);
ComparisonReport ks_one_sample(const VectorRef& samples, const std::function<double(double)>& cdf,
                               double coefficient = 1.95);

/// Two-sample KS distance; threshold coefficient·√((n+m)/(nm)).
ComparisonReport ks_two_sample(const VectorRef& a, const VectorRef& b, double coefficient = 1.95);

struct Histogram {
  Eigen::VectorXd edges;  ///< bins + 1 edges
  Eigen::VectorXd density;
  Eigen::VectorXd std_err;
  Eigen::VectorXd mass;      ///< weighted fraction per bin
  Eigen::VectorXd mass_err;  ///< standard error of mass
  double ess = 0.0;
};

/// Weighted histogram on [lo, hi) with self-normalized weights; samples
/// outside the range count towards the normalization only.
Histogram weighted_histogram(const VectorRef& samples, const VectorRef& log_weights, double lo, double hi,
                             int bins);
Histogram histogram(const VectorRef& samples, double lo, double hi, int bins);

/// χ² = Σ ((estimate - expected)/std_err)² over bins with std_err > 0.
/// Passes when χ² < dof + 3√(2 dof).
ComparisonReport binned_chi_square(const VectorRef& estimate, const VectorRef& std_err, const VectorRef& expected);

struct MomentEstimate {
  Eigen::VectorXd values;
  Eigen::VectorXd std_err;
};

/// Self-normalized raw moments E[x^k] with block-jackknife errors.
MomentEstimate weighted_moments(const VectorRef& samples, const VectorRef& log_weights, const std::vector<int>& orders,
                                int blocks = 20);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

/// Least-squares slope of log(errors) against log(deltas).
SlopeFit convergence_order(const std::vector<double>& deltas, const std::vector<double>& errors);

/// Least-squares line y = intercept + slope·x with the slope's standard error.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};
LineFit fit_line(const VectorRef& x, const VectorRef& y);

/// Integrated autocorrelation time by batch means with √n batches.
double integrated_autocorr_time(const VectorRef& series);

}  // namespace kpz
