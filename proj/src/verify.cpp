#include "kpz/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>

#include "kpz/analytic.hpp"
#include "kpz/error.hpp"
#include "kpz/lqm.hpp"
#include "kpz/parallel.hpp"
#include "kpz/quadrature.hpp"
#include "kpz/sampler.hpp"
#include "kpz/specfun.hpp"
#include "kpz/stats.hpp"

namespace kpz {

long VerifyOptions::scaled(long n) const {
  return std::max<long>(200, std::lround(static_cast<double>(n) * scale));
}

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

CheckResult within_sigma(const std::string& name, double estimate, double std_err, double exact, double sigmas = 3.0) {
  CheckResult c;
  c.name = name;
  c.statistic = std_err > 0.0 ? std::abs(estimate - exact) / std_err : (estimate == exact ? 0.0 : INFINITY);
  c.threshold = sigmas;
  c.passed = c.statistic < sigmas;
  c.detail = fmt("estimate=%.6g stderr=%.3g exact=%.6g", estimate, std_err, exact);
  return c;
}

CheckResult below(const std::string& name, double statistic, double threshold, const std::string& detail = "") {
  CheckResult c;
  c.name = name;
  c.statistic = statistic;
  c.threshold = threshold;
  c.passed = statistic < threshold;
  c.detail = detail;
  return c;
}

/// CDF of a density tabulated on [lo, hi] by cumulative trapezoid.
std::function<double(double)> tabulated_cdf(const std::function<double(double)>& pdf, double lo, double hi,
                                            int n = 40000) {
  auto cum = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n) + 1, 0.0);
  const double h = (hi - lo) / n;
  double prev = pdf(lo);
  for (int i = 1; i <= n; ++i) {
    const double cur = pdf(lo + i * h);
    (*cum)[static_cast<std::size_t>(i)] = (*cum)[static_cast<std::size_t>(i) - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  return [cum, lo, h, n](double x) {
    const double t = (x - lo) / h;
    if (t <= 0.0) return 0.0;
    if (t >= n) return cum->back();
    const auto i = static_cast<std::size_t>(t);
    const double f = t - static_cast<double>(i);
    return (1.0 - f) * (*cum)[i] + f * (*cum)[i + 1];
  };
}

std::uint64_t seed_for(const VerifyOptions& o, std::uint64_t id) { return o.seed * 1000003ull + id; }

// --- analytic consistency ---------------------------------------------------

std::vector<CheckResult> check_pdf_normalization(const VerifyOptions&) {
  const std::vector<ModelParams> cases{{-0.5, -0.5, 1.0}, {-0.2, -0.8, 1.0}, {-1.3, -0.7, 1.0}, {-2.2, -0.8, 2.0},
                                       {-5.5, -0.5, 1.0}, {0.8, 0.2, 2.0},   {0.3, -0.3, 2.0}};
  double worst = 0.0;
  for (const auto& p : cases) {
    const auto r = integrate_adaptive([&](double y) { return pdf_Y(p, y); }, Domain{-INFINITY, INFINITY}, 1e-10);
    worst = std::max(worst, std::abs(r.value - 1.0));
  }
  return {below("pdf_normalization", worst, 1e-6, fmt("max |∫P - 1| = %.3g", worst))};
}

std::vector<CheckResult> check_fp_triangle(const VerifyOptions&) {
  const RescaledParams r{1.0, 1.0};
  const double c = 0.5;
  const auto lap = integrate_adaptive([&](double y) { return std::exp(-c * y) * fp_pdf_Y(r, y); }, Domain{-40.0, 40.0},
                                      QuadOptions{0.0, 1e-13, 2000});
  const double e1 = std::abs(lap.value - fp_laplace(r, c));
  const auto marg = integrate_adaptive([&](double y) { return fp_min_end_pdf(r, y, 0.3); }, Domain{-INFINITY, 0.0}, 1e-12);
  const double e2 = std::abs(marg.value - fp_pdf_Y(r, 0.3)) / fp_pdf_Y(r, 0.3);
  const RescaledParams q{0.5, 1.5};
  const auto mass = integrate_adaptive(
      [&](double y) {
        return integrate_adaptive([&](double Y) { return fp_min_end_pdf(q, y, Y); }, Domain{y, INFINITY}, 1e-12).value;
      },
      Domain{-INFINITY, 0.0}, 1e-10);
  const double e3 = std::abs(mass.value - 1.0);
  const double worst = std::max({e1, e2, e3});
  return {below("fp_triangle", worst, 1e-6, fmt("laplace=%.3g marginal=%.3g mass=%.3g", e1, e2, e3))};
}

std::vector<CheckResult> check_cumulant_consistency(const VerifyOptions&) {
  const double w = -1.0, L = 1.5, v = -0.3, h = 1e-4;
  auto lz = [&](double vv) { return log_norm_Z({w - vv, vv, L}); };
  const double d1 = -0.5 * (lz(v + h) - lz(v - h)) / (2.0 * h);
  const double d2 = 0.25 * (lz(v + h) - 2.0 * lz(v) + lz(v - h)) / (h * h);
  const ModelParams p{w - v, v, L};
  const double e1 = std::abs(d1 - cumulant_Y(p, 1));
  const double e2 = std::abs(d2 - cumulant_Y(p, 2));
  return {below("cumulant_consistency", std::max(e1, e2), 1e-5, fmt("order1=%.3g order2=%.3g", e1, e2))};
}

// --- finite-L measure -------------------------------------------------------

std::vector<CheckResult> check_normalization(const VerifyOptions& o) {
  const ModelParams p{-0.2, -0.8, 1.0};
  const EstimateReport r =
      is_estimate(obs::constant(), p, o.scaled(100000), 1024, -p.v, seed_for(o, 1), Normalization::unnormalized);
  return {within_sigma("normalization", r.value, r.std_err, norm_Z(p))};
}

std::vector<CheckResult> check_one_point_law(const VerifyOptions& o) {
  const ModelParams p{-0.5, -0.5, 1.0};
  const McmcResult m = mcmc_sample({obs::endpoint()}, p, o.scaled(100000), 256, seed_for(o, 2));
  const auto cdf = tabulated_cdf([&](double y) { return pdf_Y(p, y); }, -8.0, 8.0);
  const ComparisonReport ks = ks_one_sample(m.values.col(0), cdf);
  return {below("one_point_law", ks.statistic, 0.02,
                fmt("mcmc KS=%.4g acceptance=%.3g tau=%.3g beta=%.3g", ks.statistic, m.acceptance, m.tau, m.beta))};
}

std::vector<CheckResult> check_mean_variance(const VerifyOptions& o) {
  const ModelParams p{-0.2, -0.8, 1.0};
  const double mean = cumulant_Y(p, 1);
  const Observable centered_sq = [mean](const Sample& s) { return (s.path.end() - mean) * (s.path.end() - mean); };
  const ObservableSamples s = is_sample({obs::endpoint(), centered_sq}, p, o.scaled(100000), 256, -p.v, seed_for(o, 3));
  const EstimateReport m = summarize(s, 0), v = summarize(s, 1);
  return {within_sigma("mean_line", m.value, m.std_err, mean),
          within_sigma("variance_line", v.value, v.std_err, cumulant_Y(p, 2))};
}

std::vector<CheckResult> check_mean_profile(const VerifyOptions& o) {
  const ModelParams p{-0.5, -0.5, 1.0};
  const EstimateReport r = is_estimate(obs::value_at(0.5), p, o.scaled(100000), 256, -p.v, seed_for(o, 4));
  return {within_sigma("mean_profile", r.value, r.std_err, mean_profile(p, 0.5))};
}

// --- Liouville quantum mechanics -------------------------------------------

std::vector<CheckResult> check_matrix_element(const VerifyOptions&) {
  double worst = 0.0;
  for (double alpha : {0.5, 1.0, 1.5})
    for (auto [k, kp] : {std::pair{0.5, 1.0}, std::pair{1.0, 1.0}, std::pair{0.5, 2.0}})
      worst = std::max(worst, verify_matrix_element(alpha, k, kp).rel_err());
  return {below("matrix_element", worst, 1e-6, fmt("max relative error %.3g over 9 points", worst))};
}

std::vector<CheckResult> check_id1(const VerifyOptions&) {
  double worst = 0.0;
  for (double w : {0.5, 1.0, 1.5})
    for (double k : {0.25, 1.0, 2.0}) worst = std::max(worst, verify_id1(w, k).rel_err());
  return {below("id1", worst, 1e-6, fmt("max relative error %.3g over 9 points", worst))};
}

std::vector<CheckResult> check_laplace_finite_limit(const VerifyOptions&) {
  const double target = laplace_limit(1.0, 1.0, 1.0);
  const double at100 = laplace_finite({1.0, 1.0, 100.0}, 1.0);
  const double at1000 = laplace_finite({1.0, 1.0, 1000.0}, 1.0);
  CheckResult main = below("laplace_finite_limit", std::abs(at100 - target), 1e-3,
                           fmt("L=100: %.6g limit=%.6g", at100, target));
  CheckResult info = below("laplace_finite_L1000", std::abs(at1000 - target), 1e-3,
                           fmt("L=1000: %.6g limit=%.6g", at1000, target));
  info.informational = true;
  return {main, info};
}

std::vector<CheckResult> check_fp_laplace_quadrature(const VerifyOptions&) {
  const RescaledParams r{1.0, 1.0};
  const double c = 0.5;
  const auto q = integrate_adaptive([&](double y) { return std::exp(-c * y) * fp_pdf_Y(r, y); }, Domain{-40.0, 40.0},
                                    QuadOptions{0.0, 1e-13, 2000});
  const double closed = fp_laplace(r, c);
  return {below("fp_laplace_quadrature", std::abs(q.value - closed), 1e-8,
                fmt("closed=%.12g quadrature=%.12g", closed, q.value))};
}

std::vector<CheckResult> check_laplace_J_mc(const VerifyOptions& o) {
  const ModelParams p{1.0, 1.0, 1.0};
  const double x1 = 0.5, s1 = 0.4;
  const double ratio = laplace_J_ratio({{x1}, {s1}, p});
  const auto idx = obs::value_at(x1);
  const Observable f = [idx, s1](const Sample& s) { return std::exp(-s1 * idx(s)); };
  const EstimateReport r = is_estimate(f, p, o.scaled(100000), 256, -p.v, seed_for(o, 6));
  return {within_sigma("laplace_J_mc", r.value, r.std_err, ratio)};
}

// --- rescaled measure -------------------------------------------------------

std::vector<CheckResult> check_fixed_point(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  {
    const RescaledParams r{1.0, 0.0};
    const EstimateReport e =
        fp_is_estimate(obs::constant(), r, o.scaled(100000), 256, seed_for(o, 7), Normalization::unnormalized);
    out.push_back(within_sigma("fp_normalization", e.value, e.std_err, fp_norm(r)));
  }
  const RescaledParams r{1.0, 1.0};
  const ObservableSamples s = fp_is_sample({obs::endpoint(), obs::minimum()}, r, o.scaled(100000), 256, seed_for(o, 8));
  {
    const auto cdf = tabulated_cdf([&](double y) { return fp_pdf_Y(r, y); }, -8.0, 8.0);
    const ComparisonReport ks = ks_one_sample(s.values.col(0), normalized_weights(s.log_weights), cdf);
    out.push_back(below("fp_endpoint_ks", ks.statistic, 0.02, fmt("KS=%.4g ess=%.6g", ks.statistic, ks.n_effective)));
  }
  {
    // bins in (y, d) with y = min <= 0 and d = X(1) - min >= 0
    const int ny = 8, nd = 8;
    const double ylo = -1.2, dhi = 2.0;
    const double hy = -ylo / ny, hd = dhi / nd;
    Eigen::VectorXd cell(s.values.rows());
    for (Eigen::Index i = 0; i < cell.size(); ++i) {
      const double y = s.values(i, 1), d = s.values(i, 0) - y;
      const int iy = static_cast<int>(std::floor((y - ylo) / hy));
      const int id = static_cast<int>(std::floor(d / hd));
      cell(i) = (iy >= 0 && iy < ny && id >= 0 && id < nd) ? iy * nd + id + 0.5 : -1.0;
    }
    const Histogram h = weighted_histogram(cell, s.log_weights, 0.0, ny * nd, ny * nd);
    Eigen::VectorXd expected(ny * nd);
    for (int iy = 0; iy < ny; ++iy)
      for (int id = 0; id < nd; ++id) {
        const double y0 = ylo + iy * hy, d0 = id * hd;
        expected(iy * nd + id) =
            integrate_adaptive(
                [&](double y) {
                  return integrate_adaptive([&](double d) { return fp_min_end_pdf(r, y, y + d); },
                                            Domain{d0, d0 + hd}, 1e-11)
                      .value;
                },
                Domain{y0, y0 + hy}, 1e-10)
                .value;
      }
    const ComparisonReport chi = binned_chi_square(h.mass, h.mass_err, expected);
    out.push_back(below("fp_min_end_chi2", chi.statistic, chi.threshold,
                        fmt("chi2=%.4g threshold=%.4g", chi.statistic, chi.threshold) + " " + chi.notes));
  }
  return out;
}

// --- inverse Gamma limits ---------------------------------------------------

std::vector<CheckResult> check_inverse_gamma(const VerifyOptions& o) {
  const double L = 20.0;
  const int n_steps = 2560;
  const long n = o.scaled(100000);
  std::vector<CheckResult> out;
  {
    const Stream root(seed_for(o, 9));
    Eigen::VectorXd inv(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      Stream rng = root.split(i);
      inv(static_cast<Eigen::Index>(i)) = std::exp(-log_exp_functional(sample_brownian(L, n_steps, 1.0, 0.5, rng)));
    });
    const ComparisonReport ks = ks_one_sample(inv, [](double x) { return x <= 0.0 ? 0.0 : gamma_p(2.0, x); });
    out.push_back(below("inverse_gamma_brownian", ks.statistic, 0.02, fmt("KS=%.4g", ks.statistic)));
  }
  {
    const ModelParams p{0.5, -1.0, L};
    const ObservableSamples s = is_sample({obs::inverse_z()}, p, n, n_steps, -p.v, seed_for(o, 10));
    const ComparisonReport ks = ks_one_sample(s.values.col(0), normalized_weights(s.log_weights),
                                              [](double x) { return x <= 0.0 ? 0.0 : gamma_p(1.5, x); });
    out.push_back(
        below("inverse_gamma_stationary", ks.statistic, 0.02, fmt("KS=%.4g ess=%.6g", ks.statistic, ks.n_effective)));
  }
  return out;
}

// --- half-line processes ----------------------------------------------------

std::vector<CheckResult> check_hy_drift(const VerifyOptions& o) {
  const double u = 0.5, v = -1.0, x_max = 20.0;
  const int n_steps = 2000;
  const long n = o.scaled(10000);
  const Stream root(seed_for(o, 11));
  const Eigen::Index i0 = n_steps / 2;
  const Eigen::Index m = n_steps - i0 + 1;
  const Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(m, 10.0, 20.0);
  const double xm = xs.mean();
  const double sxx = (xs.array() - xm).square().sum();
  Eigen::VectorXd slopes(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    Stream rng = root.split(i);
    const Path h = sample_hy_high_density(u, v, x_max, n_steps, rng);
    const Eigen::VectorXd y = h.values.tail(m);
    slopes(static_cast<Eigen::Index>(i)) = ((xs.array() - xm) * (y.array() - y.mean())).sum() / sxx;
  });
  const double mean = slopes.mean();
  const double se = std::sqrt((slopes.array() - mean).square().sum() / (n - 1.0) / n);
  return {within_sigma("hy_drift", mean, se, -v)};
}

std::vector<CheckResult> check_hy_reduction(const VerifyOptions& o) {
  const double u = 1.0, v = -1.0;
  const long n = o.scaled(100000);
  const Stream root(seed_for(o, 12));
  Eigen::VectorXd ends(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    Stream rng = root.split(i);
    ends(static_cast<Eigen::Index>(i)) = sample_hy_high_density(u, v, 1.0, 500, rng).end();
  });
  const ComparisonReport ks = ks_one_sample(ends, [u](double x) { return normal_cdf(x - u); });
  return {below("hy_reduction", ks.statistic, 0.02, fmt("KS=%.4g", ks.statistic))};
}

std::vector<CheckResult> check_idelaw(const VerifyOptions& o) {
  const IdelawReport r = verify_idelaw(-1.0, 1.0, o.scaled(100000), 500, seed_for(o, 13));
  CheckResult c;
  c.name = "idelaw";
  c.statistic = std::max(r.process.statistic, r.scalar.statistic);
  c.threshold = 0.02;
  c.passed = r.passed;
  c.detail = fmt("process KS=%.4g scalar KS=%.4g truncation warnings=%.0f", r.process.statistic, r.scalar.statistic,
                 static_cast<double>(r.truncation_warnings));
  return {c};
}

CheckResult delta_limit_check(const std::string& name, const ModelParams& p, long n, double steps_per_unit,
                              std::uint64_t seed) {
  const DeltaLimitReport r = verify_delta_limit(1.0, 1.0, p, {5.0, 10.0, 20.0}, n, steps_per_unit, seed);
  CheckResult c;
  c.name = name;
  c.passed = r.monotone;
  c.statistic = r.points.back().error;
  c.threshold = r.points.front().error;
  c.detail = "limit=" + fmt("%.6g", r.limit) + " method=" + to_string(r.method);
  for (const auto& pt : r.points) c.detail += fmt(" L=%g:%.5g±%.2g", pt.L, pt.estimate, pt.std_err);
  return c;
}

std::vector<CheckResult> check_delta_limit(const VerifyOptions& o) {
  return {delta_limit_check("delta_limit_max_current", {1.0, 1.0, 1.0}, o.scaled(100000), 16.0, seed_for(o, 14)),
          delta_limit_check("delta_limit_low_density", {-1.0, 0.0, 1.0}, o.scaled(100000), 16.0, seed_for(o, 15)),
          delta_limit_check("delta_limit_high_density", {0.3, -0.1, 1.0}, o.scaled(100000), 16.0, seed_for(o, 16))};
}

// --- T-transform ------------------------------------------------------------

double log_int_exp2(const Path& p) { return log_trapezoid_exp((2.0 * p.values).eval(), p.dx()); }

Path subsample(const Path& p, Eigen::Index n) {
  const Eigen::Index stride = p.n_steps() / n;
  Path out(p.L, n);
  for (Eigen::Index i = 0; i <= n; ++i) out.values(i) = p.values(i * stride);
  return out;
}

std::vector<CheckResult> check_t_transform(const VerifyOptions& o) {
  const Eigen::Index fine = 1 << 16;
  const std::vector<Eigen::Index> ns{256, 512, 1024, 2048, 4096, 8192};
  const double z = 1.0, zp = 0.5;
  const long paths = std::max<long>(4, std::lround(64 * o.scale));
  const Stream root(seed_for(o, 17));
  std::vector<CheckResult> out;

  bool identity = true;
  Eigen::MatrixXd rec(paths, ns.size()), semi(paths, ns.size()), inv(paths, ns.size());
  std::vector<char> ident(static_cast<std::size_t>(paths), 1);
  parallel_for(static_cast<std::size_t>(paths), [&](std::size_t j) {
    Stream rng = root.split(j);
    const Path x = sample_brownian(1.0, fine, 0.0, 0.5, rng);
    ident[j] = (t_transform(x, 0.0).values.array() == x.values.array()).all() ? 1 : 0;
    const Path tz = t_transform(x, z);
    const Path tzz = t_transform(x, z + zp);
    const double inv_fine = std::exp(-log_int_exp2(x));
    const auto row = static_cast<Eigen::Index>(j);
    for (std::size_t k = 0; k < ns.size(); ++k) {
      const auto col = static_cast<Eigen::Index>(k);
      const Path xn = subsample(x, ns[k]);
      const Path txn = t_transform(xn, z);
      rec(row, col) = std::abs(std::exp(-log_int_exp2(txn)) - inv_fine - z);
      semi(row, col) = (t_transform(txn, zp).values - subsample(tzz, ns[k]).values).cwiseAbs().maxCoeff();
      inv(row, col) = (t_transform(subsample(tz, ns[k]), -z).values - xn.values).cwiseAbs().maxCoeff();
    }
  });
  for (char c : ident) identity = identity && c;
  CheckResult id;
  id.name = "t_identity";
  id.passed = identity;
  id.detail = identity ? "T_0 reproduces every path exactly" : "T_0 changed a path";
  out.push_back(id);

  std::vector<double> deltas;
  for (auto n : ns) deltas.push_back(1.0 / static_cast<double>(n));
  auto slope_check = [&](const std::string& name, const Eigen::MatrixXd& res) {
    std::vector<double> errs;
    for (Eigen::Index k = 0; k < res.cols(); ++k) errs.push_back(res.col(k).mean());
    const SlopeFit f = convergence_order(deltas, errs);
    return below(name, std::abs(f.slope - 1.0), 0.2, fmt("slope=%.4g residual=%.3g", f.slope, f.residual_rms));
  };
  out.push_back(slope_check("t_reciprocal_order", rec));
  out.push_back(slope_check("t_semigroup_order", semi));
  out.push_back(slope_check("t_inverse_order", inv));
  return out;
}

// --- limits of the interval measure -----------------------------------------

std::vector<CheckResult> check_ew_limit(const VerifyOptions& o) {
  const double L = 0.01;
  const RescaledParams r{1.0, 1.0};
  const ModelParams p{r.u_t / std::sqrt(L), r.v_t / std::sqrt(L), L};
  const std::vector<double> xts{0.25, 0.5, 0.75};
  std::vector<Observable> observables;
  for (double xt : xts) {
    const auto at = obs::value_at(xt * L);
    observables.push_back([at, L](const Sample& s) { return at(s) / std::sqrt(L); });
  }
  const ObservableSamples s = is_sample(observables, p, o.scaled(100000), 256, 0.0, seed_for(o, 18));
  CheckResult c;
  c.name = "ew_limit";
  c.threshold = 3.0;
  for (std::size_t k = 0; k < xts.size(); ++k) {
    const EstimateReport e = summarize(s, static_cast<Eigen::Index>(k));
    const double exact = ew_mean_profile(r, xts[k]);
    const double zscore = std::abs(e.value - exact) / e.std_err;
    c.statistic = std::max(c.statistic, zscore);
    c.detail += fmt("x=%.2g: %.5g±%.2g (exact %.5g) ", xts[k], e.value, e.std_err, exact);
  }
  c.passed = c.statistic < c.threshold;
  return {c};
}

std::vector<CheckResult> check_dp_endpoint(const VerifyOptions& o) {
  const ModelParams p{-0.5, -0.5, 8.0};
  const EndpointRatioSamples s = endpoint_ratio_samples(p, o.scaled(100000), 512, seed_for(o, 19));
  const double c = 0.5 * p.L - std::sqrt(p.L);
  const int bins = 10;
  const Histogram h = histogram(s.Y, -c, c, bins);
  const double mean_mass = h.mass.mean();
  double chi2 = 0.0;
  for (int b = 0; b < bins; ++b) chi2 += std::pow((h.mass(b) - mean_mass) / h.mass_err(b), 2);
  const double dof = bins - 1.0;
  const double threshold = dof + 3.0 * std::sqrt(2.0 * dof);
  return {below("dp_endpoint_flatness", chi2, threshold, fmt("chi2=%.4g dof=%.0f |Y|<%.4g", chi2, dof, c))};
}

}  // namespace

Json to_json(const CheckResult& c) {
  Json j;
  j["name"] = c.name;
  j["passed"] = c.passed;
  j["statistic"] = c.statistic;
  j["threshold"] = c.threshold;
  j["detail"] = c.detail;
  if (c.informational) j["informational"] = true;
  return j;
}

const std::vector<NamedCheck>& check_registry() {
  static const std::vector<NamedCheck> registry{
      {"pdf_normalization", "analytic", check_pdf_normalization},
      {"fp_triangle", "analytic", check_fp_triangle},
      {"cumulant_consistency", "analytic", check_cumulant_consistency},
      {"normalization", "interval", check_normalization},
      {"one_point_law", "interval", check_one_point_law},
      {"mean_variance", "interval", check_mean_variance},
      {"mean_profile", "interval", check_mean_profile},
      {"matrix_element", "lqm", check_matrix_element},
      {"id1", "lqm", check_id1},
      {"laplace_finite_limit", "laplace", check_laplace_finite_limit},
      {"fp_laplace_quadrature", "laplace", check_fp_laplace_quadrature},
      {"laplace_J_mc", "laplace", check_laplace_J_mc},
      {"fixed_point", "fixed_point", check_fixed_point},
      {"inverse_gamma", "limits", check_inverse_gamma},
      {"hy_drift", "half_line", check_hy_drift},
      {"hy_reduction", "half_line", check_hy_reduction},
      {"idelaw", "half_line", check_idelaw},
      {"delta_limit", "half_line", check_delta_limit},
      {"t_transform", "t_transform", check_t_transform},
      {"ew_limit", "limits", check_ew_limit},
      {"dp_endpoint", "limits", check_dp_endpoint},
  };
  return registry;
}

BatteryResult run_battery(const VerifyOptions& opt) {
  BatteryResult out;
  Json checks = Json::array();
  for (const NamedCheck& nc : check_registry()) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), nc.name) == opt.only.end() &&
        std::find(opt.only.begin(), opt.only.end(), nc.group) == opt.only.end())
      continue;
    std::vector<CheckResult> results;
    try {
      results = nc.run(opt);
    } catch (const std::exception& e) {
      CheckResult c;
      c.name = nc.name;
      c.detail = std::string("error: ") + e.what();
      results.push_back(c);
    }
    for (const CheckResult& c : results) {
      Json j = to_json(c);
      j["group"] = nc.group;
      checks.push_back(j);
      if (!c.passed && !c.informational) out.all_passed = false;
    }
  }
  out.report["version"] = kVersion;
  out.report["seed"] = opt.seed;
  out.report["scale"] = opt.scale;
  out.report["checks"] = checks;
  out.report["all_passed"] = out.all_passed;
  return out;
}

}  // namespace kpz
