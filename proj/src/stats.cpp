#include "kpz/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kpz/error.hpp"

namespace kpz {

namespace {

Eigen::VectorXd relative_weights(const VectorRef& log_weights) {
  require(log_weights.size() > 0, "empty weight vector");
  const double m = log_weights.maxCoeff();
  require(std::isfinite(m), "log-weights must be finite");
  return (log_weights.array() - m).exp().matrix();
}

std::vector<Eigen::Index> sort_order(const VectorRef& x) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index(0));
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return x(a) < x(b); });
  return idx;
}

}  // namespace

Eigen::VectorXd normalized_weights(const VectorRef& log_weights) {
  Eigen::VectorXd w = relative_weights(log_weights);
  return w / w.sum();
}

double effective_sample_size(const VectorRef& log_weights) {
  const Eigen::VectorXd w = relative_weights(log_weights);
  const double s = w.sum();
  return s * s / w.squaredNorm();
}

WeightedMean weighted_mean(const VectorRef& samples, const VectorRef& log_weights) {
  require(samples.size() == log_weights.size(), "weighted_mean: size mismatch");
  const Eigen::VectorXd w = normalized_weights(log_weights);
  WeightedMean r;
  r.value = w.dot(samples);
  r.std_err = std::sqrt((w.array().square() * (samples.array() - r.value).square()).sum());
  r.ess = 1.0 / w.squaredNorm();
  return r;
}

ComparisonReport ks_one_sample(const VectorRef& samples, const VectorRef& weights,
                               const std::function<double(double)>& cdf, double coefficient) {
  require(samples.size() > 0, "ks_one_sample: empty input");
  require(samples.size() == weights.size(), "ks_one_sample: size mismatch");
  require((weights.array() >= 0.0).all() && weights.sum() > 0.0, "ks_one_sample: weights must be >= 0, not all zero");
  const double total = weights.sum();
  const auto idx = sort_order(samples);
  double cum = 0.0, d = 0.0;
  for (Eigen::Index i : idx) {
    const double f = cdf(samples(i));
    d = std::max(d, std::abs(f - cum));
    cum += weights(i) / total;
    d = std::max(d, std::abs(f - cum));
  }
  ComparisonReport r;
  r.statistic = d;
  r.n_effective = total * total / weights.squaredNorm();
  r.threshold = coefficient / std::sqrt(r.n_effective);
  r.passed = d < r.threshold;
  return r;
}

ComparisonReport ks_one_sample(const VectorRef& samples, const std::function<double(double)>& cdf, double coefficient) {
  return ks_one_sample(samples, Eigen::VectorXd::Ones(samples.size()), cdf, coefficient);
}

ComparisonReport ks_two_sample(const VectorRef& a, const VectorRef& b, double coefficient) {
  require(a.size() > 0 && b.size() > 0, "ks_two_sample: empty input");
  std::vector<double> x(a.data(), a.data() + a.size()), y(b.data(), b.data() + b.size());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::abs(i / n - j / m));
  }
  ComparisonReport r;
  r.statistic = d;
  r.n_effective = n * m / (n + m);
  r.threshold = coefficient / std::sqrt(r.n_effective);
  r.passed = d < r.threshold;
  return r;
}

Histogram weighted_histogram(const VectorRef& samples, const VectorRef& log_weights, double lo, double hi, int bins) {
  require(bins >= 1 && hi > lo, "weighted_histogram: requires bins >= 1 and hi > lo");
  require(samples.size() == log_weights.size(), "weighted_histogram: size mismatch");
  const Eigen::VectorXd w = normalized_weights(log_weights);
  const double width = (hi - lo) / bins;
  Histogram h;
  h.edges = Eigen::VectorXd::LinSpaced(bins + 1, lo, hi);
  h.mass = Eigen::VectorXd::Zero(bins);
  std::vector<int> bin_of(static_cast<std::size_t>(samples.size()), -1);
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    const double t = (samples(i) - lo) / width;
    if (t >= 0.0 && t < bins) {
      const int b = static_cast<int>(t);
      bin_of[static_cast<std::size_t>(i)] = b;
      h.mass(b) += w(i);
    }
  }
  Eigen::VectorXd var = Eigen::VectorXd::Zero(bins);
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    const int own = bin_of[static_cast<std::size_t>(i)];
    const double w2 = w(i) * w(i);
    // Σ_i w_i² (1_b - p_b)², split into the own-bin term and the rest
    var.array() += w2 * h.mass.array().square();
    if (own >= 0) var(own) += w2 * (1.0 - 2.0 * h.mass(own));
  }
  h.mass_err = var.cwiseSqrt();
  h.density = h.mass / width;
  h.std_err = h.mass_err / width;
  h.ess = 1.0 / w.squaredNorm();
  return h;
}

Histogram histogram(const VectorRef& samples, double lo, double hi, int bins) {
  return weighted_histogram(samples, Eigen::VectorXd::Zero(samples.size()), lo, hi, bins);
}

ComparisonReport binned_chi_square(const VectorRef& estimate, const VectorRef& std_err, const VectorRef& expected) {
  require(estimate.size() == std_err.size() && estimate.size() == expected.size(), "binned_chi_square: size mismatch");
  double chi2 = 0.0;
  int dof = 0;
  for (Eigen::Index i = 0; i < estimate.size(); ++i) {
    if (!(std_err(i) > 0.0)) continue;
    const double z = (estimate(i) - expected(i)) / std_err(i);
    chi2 += z * z;
    ++dof;
  }
  require(dof > 0, "binned_chi_square: no bins with positive error");
  ComparisonReport r;
  r.statistic = chi2;
  r.threshold = dof + 3.0 * std::sqrt(2.0 * dof);
  r.passed = chi2 < r.threshold;
  r.n_effective = dof;
  r.notes = "dof=" + std::to_string(dof);
  return r;
}

MomentEstimate weighted_moments(const VectorRef& samples, const VectorRef& log_weights, const std::vector<int>& orders,
                                int blocks) {
  require(samples.size() == log_weights.size(), "weighted_moments: size mismatch");
  require(blocks >= 2 && samples.size() >= blocks, "weighted_moments: need at least two non-empty blocks");
  const Eigen::VectorXd w = relative_weights(log_weights);
  const Eigen::Index n = samples.size();
  MomentEstimate out;
  out.values.resize(static_cast<Eigen::Index>(orders.size()));
  out.std_err.resize(static_cast<Eigen::Index>(orders.size()));
  Eigen::VectorXd wb = Eigen::VectorXd::Zero(blocks);
  for (Eigen::Index i = 0; i < n; ++i) wb(i * blocks / n) += w(i);
  const double wt = wb.sum();
  for (std::size_t o = 0; o < orders.size(); ++o) {
    const int k = orders[o];
    Eigen::VectorXd nb = Eigen::VectorXd::Zero(blocks);
    for (Eigen::Index i = 0; i < n; ++i) nb(i * blocks / n) += w(i) * std::pow(samples(i), k);
    const double nt = nb.sum();
    Eigen::VectorXd loo = ((nt - nb.array()) / (wt - wb.array())).matrix();
    const double mean = loo.mean();
    const auto e = static_cast<Eigen::Index>(o);
    out.values(e) = (k == 0) ? 1.0 : nt / wt;
    out.std_err(e) = std::sqrt((blocks - 1.0) / blocks * (loo.array() - mean).square().sum());
  }
  return out;
}

SlopeFit convergence_order(const std::vector<double>& deltas, const std::vector<double>& errors) {
  require(deltas.size() == errors.size() && deltas.size() >= 3, "convergence_order: need >= 3 points");
  Eigen::VectorXd x(static_cast<Eigen::Index>(deltas.size())), y(x.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    require(deltas[i] > 0.0 && errors[i] > 0.0, "convergence_order: values must be positive");
    x(static_cast<Eigen::Index>(i)) = std::log(deltas[i]);
    y(static_cast<Eigen::Index>(i)) = std::log(errors[i]);
  }
  require(x.maxCoeff() > x.minCoeff(), "convergence_order: constant deltas");
  const LineFit f = fit_line(x, y);
  SlopeFit r{f.slope, f.intercept, 0.0};
  r.residual_rms = std::sqrt((y.array() - f.intercept - f.slope * x.array()).square().mean());
  return r;
}

LineFit fit_line(const VectorRef& x, const VectorRef& y) {
  require(x.size() == y.size() && x.size() >= 3, "fit_line: need >= 3 points");
  const double n = static_cast<double>(x.size());
  const double mx = x.mean(), my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  require(sxx > 0.0, "fit_line: constant abscissa");
  LineFit f;
  f.slope = ((x.array() - mx) * (y.array() - my)).sum() / sxx;
  f.intercept = my - f.slope * mx;
  const double rss = (y.array() - f.intercept - f.slope * x.array()).square().sum();
  f.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  return f;
}

double integrated_autocorr_time(const VectorRef& series) {
  const Eigen::Index n = series.size();
  require(n >= 16, "integrated_autocorr_time: series too short");
  const Eigen::Index b = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::sqrt(static_cast<double>(n))));
  const Eigen::Index nb = n / b;
  const double mean = series.head(nb * b).mean();
  const double var = (series.head(nb * b).array() - mean).square().sum() / (nb * b - 1.0);
  if (var == 0.0) return 1.0;
  double bvar = 0.0;
  for (Eigen::Index k = 0; k < nb; ++k) {
    const double m = series.segment(k * b, b).mean() - mean;
    bvar += m * m;
  }
  bvar /= (nb - 1.0);
  return std::max(1.0, b * bvar / var);
}

}  // namespace kpz
