#include "kpz/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kpz/analytic.hpp"
#include "kpz/error.hpp"
#include "kpz/parallel.hpp"
#include "kpz/specfun.hpp"

namespace kpz {

namespace obs {

Observable endpoint() {
  return [](const Sample& s) { return s.path.end(); };
}

Observable endpoint_power(int k) {
  return [k](const Sample& s) { return std::pow(s.path.end(), k); };
}

Observable value_at(double x) {
  return [x](const Sample& s) {
    const auto i = static_cast<Eigen::Index>(std::llround(x / s.path.dx()));
    return s.path.values(std::clamp<Eigen::Index>(i, 0, s.path.n_steps()));
  };
}

Observable z_power(double k) {
  return [k](const Sample& s) { return std::exp(k * s.log_z); };
}

Observable inverse_z() { return z_power(-1.0); }

Observable minimum() {
  return [](const Sample& s) { return s.min_value; };
}

Observable constant(double c) {
  return [c](const Sample&) { return c; };
}

}  // namespace obs

std::string to_string(Method m) {
  switch (m) {
    case Method::is: return "is";
    case Method::mcmc: return "mcmc";
    case Method::exact: return "exact";
  }
  return "unknown";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void record(Eigen::MatrixXd& values, Eigen::Index row, const std::vector<Observable>& observables, const Sample& s) {
  for (std::size_t c = 0; c < observables.size(); ++c) values(row, static_cast<Eigen::Index>(c)) = observables[c](s);
}

/// State of one pCN chain on the base with drift b.
struct ChainState {
  Path path;
  double log_z = 0.0;
  double energy = 0.0;
};

class PcnChain {
 public:
  PcnChain(const ModelParams& p, int n_steps, double beta, Stream rng)
      : p_(p), n_(n_steps), beta_(beta), rng_(rng), mean_(Eigen::VectorXd::LinSpaced(n_steps + 1, 0.0, -p.v * p.L)) {
    state_.path = sample_brownian(p.L, n_, -p.v, 0.5, rng_);
    state_.log_z = log_exp_functional(state_.path);
    state_.energy = p.w() * state_.log_z;
  }

  void set_beta(double beta) { beta_ = beta; }

  /// One proposal; returns true on acceptance.
  bool step() {
    const Path xi = sample_brownian(p_.L, n_, 0.0, 0.5, rng_);
    const double rho = std::sqrt(1.0 - beta_ * beta_);
    Path prop(p_.L, (mean_ + rho * (state_.path.values - mean_) + beta_ * xi.values).eval());
    prop.values(0) = 0.0;
    const double lz = log_exp_functional(prop);
    const double e = p_.w() * lz;
    const double log_u = std::log(rng_.uniform());
    if (!std::isfinite(e)) {
      ++nonfinite_;
      return false;
    }
    if (log_u < state_.energy - e) {
      state_.path = std::move(prop);
      state_.log_z = lz;
      state_.energy = e;
      return true;
    }
    return false;
  }

  const ChainState& state() const { return state_; }
  long nonfinite() const { return nonfinite_; }

 private:
  ModelParams p_;
  int n_;
  double beta_;
  Stream rng_;
  Eigen::VectorXd mean_;
  ChainState state_;
  long nonfinite_ = 0;
};

double tune_beta(const ModelParams& p, int n_steps, Stream rng) {
  if (p.w() == 0.0) return 1.0;
  PcnChain chain(p, n_steps, 0.5, rng);
  double beta = 0.5;
  for (int round = 0; round < 30; ++round) {
    chain.set_beta(beta);
    int acc = 0;
    for (int i = 0; i < 100; ++i) acc += chain.step() ? 1 : 0;
    const double rate = acc / 100.0;
    if (rate >= 0.25 && rate <= 0.40) break;
    if (beta >= 1.0 && rate > 0.40) break;
    beta = std::min(1.0, beta * std::clamp(rate / 0.3, 0.5, 2.0));
    beta = std::max(beta, 1e-3);
  }
  return beta;
}

Path drifted_path(double L, int n_steps, double drift_before, double drift_after, double split, Stream& rng) {
  const double dt = L / n_steps;
  const double sd = std::sqrt(0.5 * dt);
  Path out(L, n_steps);
  for (int i = 1; i <= n_steps; ++i) {
    const double x0 = (i - 1) * dt, x1 = i * dt;
    double mean;
    if (x1 <= split) {
      mean = drift_before * dt;
    } else if (x0 >= split) {
      mean = drift_after * dt;
    } else {
      mean = drift_before * (split - x0) + drift_after * (x1 - split);
    }
    out.values(i) = out.values(i - 1) + mean + sd * rng.gaussian();
  }
  return out;
}

}  // namespace

ObservableSamples is_sample(const std::vector<Observable>& observables, const ModelParams& p, long n, int n_steps,
                            double base_drift, std::uint64_t seed) {
  require(n >= 1 && n_steps >= 2, "is_sample: requires n >= 1 and n_steps >= 2");
  require(p.L > 0.0, "is_sample: L must be positive");
  ObservableSamples out;
  out.values.resize(n, static_cast<Eigen::Index>(observables.size()));
  out.log_weights.resize(n);
  const Stream root(seed);
  const double b = base_drift;
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    Stream rng = root.split(i);
    const Path path = sample_brownian(p.L, n_steps, b, 0.5, rng);
    const double lz = log_exp_functional(path);
    const double y = path.end();
    const auto row = static_cast<Eigen::Index>(i);
    out.log_weights(row) = -2.0 * p.v * y - p.w() * lz - 2.0 * b * y + b * b * p.L;
    record(out.values, row, observables, Sample{path, lz, path.min()});
  });
  return out;
}

EstimateReport summarize(const ObservableSamples& s, Eigen::Index col, Normalization mode) {
  EstimateReport r;
  const Eigen::VectorXd x = s.values.col(col);
  r.n_total = static_cast<long>(x.size());
  if (mode == Normalization::self_normalized) {
    const WeightedMean m = weighted_mean(x, s.log_weights);
    r.value = m.value;
    r.std_err = m.std_err;
    r.ess = m.ess;
  } else {
    const double lmax = s.log_weights.maxCoeff();
    const Eigen::ArrayXd wx = (s.log_weights.array() - lmax).exp() * x.array();
    const double n = static_cast<double>(x.size());
    const double mean = wx.mean();
    const double sd = std::sqrt((wx - mean).square().sum() / (n - 1.0));
    r.value = std::exp(lmax) * mean;
    r.std_err = std::exp(lmax) * sd / std::sqrt(n);
    r.ess = effective_sample_size(s.log_weights);
  }
  r.degenerate = r.ess < 0.01 * r.n_total;
  return r;
}

EstimateReport is_estimate(const Observable& o, const ModelParams& p, long n, int n_steps, double base_drift,
                           std::uint64_t seed, Normalization mode) {
  require(n >= 100, "is_estimate: requires n >= 100");
  EstimateReport r = summarize(is_sample({o}, p, n, n_steps, base_drift, seed), 0, mode);
  r.method = Method::is;
  r.seed = seed;
  r.params = p;
  return r;
}

McmcResult mcmc_sample(const std::vector<Observable>& observables, const ModelParams& p, long n_samples, int n_steps,
                       std::uint64_t seed, const McmcOptions& opt) {
  require(n_samples >= 1 && n_steps >= 2, "mcmc_sample: requires n_samples >= 1 and n_steps >= 2");
  require(opt.beta >= 0.0 && opt.beta <= 1.0, "mcmc_sample: beta must lie in (0, 1]");
  require(opt.chains >= 1 && opt.thin >= 1, "mcmc_sample: chains and thin must be >= 1");
  const Stream root(seed);
  McmcResult res;
  res.beta = opt.beta > 0.0 ? opt.beta : tune_beta(p, n_steps, root.split(1u << 20));
  if (opt.burn_in >= 0) {
    res.burn_in = opt.burn_in;
  } else {
    PcnChain pilot(p, n_steps, res.beta, root.split((1u << 20) + 1));
    for (int i = 0; i < 200; ++i) pilot.step();
    Eigen::VectorXd ys(2000);
    for (Eigen::Index i = 0; i < ys.size(); ++i) {
      pilot.step();
      ys(i) = pilot.state().path.end();
    }
    res.burn_in = std::max<long>(100, static_cast<long>(std::ceil(10.0 * integrated_autocorr_time(ys))));
  }

  const int chains = opt.chains;
  const long per_chain = (n_samples + chains - 1) / chains;
  Eigen::MatrixXd all(per_chain * chains, static_cast<Eigen::Index>(observables.size()));
  std::vector<long> accepted(static_cast<std::size_t>(chains), 0), nonfinite(static_cast<std::size_t>(chains), 0);
  std::vector<double> taus(static_cast<std::size_t>(chains), 1.0);
  Eigen::MatrixXd obs_taus = Eigen::MatrixXd::Ones(chains, static_cast<Eigen::Index>(observables.size()));
  parallel_for(static_cast<std::size_t>(chains), [&](std::size_t c) {
    PcnChain chain(p, n_steps, res.beta, root.split(c));
    for (long i = 0; i < res.burn_in; ++i) chain.step();
    Eigen::VectorXd ys(per_chain);
    long acc = 0;
    for (long k = 0; k < per_chain; ++k) {
      for (int t = 0; t < opt.thin; ++t) acc += chain.step() ? 1 : 0;
      const ChainState& st = chain.state();
      ys(k) = st.path.end();
      record(all, static_cast<Eigen::Index>(c) * per_chain + k, observables, Sample{st.path, st.log_z, st.path.min()});
    }
    accepted[c] = acc;
    nonfinite[c] = chain.nonfinite();
    if (per_chain >= 16) {
      taus[c] = integrated_autocorr_time(ys);
      for (Eigen::Index k = 0; k < all.cols(); ++k)
        obs_taus(static_cast<Eigen::Index>(c), k) =
            integrated_autocorr_time(all.col(k).segment(static_cast<Eigen::Index>(c) * per_chain, per_chain));
    }
  });
  res.tau_observables = obs_taus.colwise().mean().transpose();
  long acc_total = 0;
  for (int c = 0; c < chains; ++c) {
    acc_total += accepted[static_cast<std::size_t>(c)];
    res.nonfinite_rejections += nonfinite[static_cast<std::size_t>(c)];
  }
  res.acceptance = static_cast<double>(acc_total) / (static_cast<double>(per_chain) * chains * opt.thin);
  double tau_sum = 0.0;
  for (double t : taus) tau_sum += t;
  res.tau = tau_sum / chains;
  res.values = all.topRows(n_samples);
  return res;
}

WeightedEnsemble mcmc_chain(const ModelParams& p, long n_samples, int n_steps, double beta, std::uint64_t seed) {
  require(beta > 0.0 && beta <= 1.0, "mcmc_chain: beta must lie in (0, 1]");
  require(n_samples >= 1 && n_steps >= 2, "mcmc_chain: requires n_samples >= 1 and n_steps >= 2");
  PcnChain chain(p, n_steps, beta, Stream(seed));
  for (int i = 0; i < 100; ++i) chain.step();
  WeightedEnsemble e;
  e.L = p.L;
  e.params = p;
  e.values.resize(n_steps + 1, n_samples);
  e.log_weights = Eigen::VectorXd::Zero(n_samples);
  for (long k = 0; k < n_samples; ++k) {
    chain.step();
    e.values.col(k) = chain.state().path.values;
  }
  return e;
}

EstimateReport mcmc_estimate(const Observable& o, const ModelParams& p, long n_samples, int n_steps,
                             std::uint64_t seed, const McmcOptions& opt) {
  const McmcResult m = mcmc_sample({o}, p, n_samples, n_steps, seed, opt);
  EstimateReport r;
  const Eigen::VectorXd x = m.values.col(0);
  const double n = static_cast<double>(x.size());
  r.value = x.mean();
  const double sd = n > 1 ? std::sqrt((x.array() - r.value).square().sum() / (n - 1.0)) : 0.0;
  const double tau = m.tau_observables(0);
  r.std_err = sd * std::sqrt(tau / n);
  r.ess = n / tau;
  r.n_total = static_cast<long>(x.size());
  r.method = Method::mcmc;
  r.seed = seed;
  r.params = p;
  r.acceptance = m.acceptance;
  r.tau = tau;
  r.burn_in = m.burn_in;
  r.degenerate = r.ess < 0.01 * r.n_total;
  return r;
}

Path sample_stationary_exact(const ModelParams& p, int n_steps, Stream& rng) {
  require(std::abs(p.w() + 1.0) < 1e-12, "sample_stationary_exact: requires u+v = -1");
  require(n_steps >= 2 && p.L > 0.0, "sample_stationary_exact: requires n_steps >= 2 and L > 0");
  const double a = 1.0 + 2.0 * p.v;
  const double U = rng.uniform();
  const double aL = a * p.L;
  const double split = std::abs(aL) < 1e-10 ? U * p.L : std::log1p(U * std::expm1(aL)) / a;
  return drifted_path(p.L, n_steps, -(p.v + 1.0), -p.v, split, rng);
}

ObservableSamples exact_sample(const std::vector<Observable>& observables, const ModelParams& p, long n, int n_steps,
                               std::uint64_t seed) {
  ObservableSamples out;
  out.values.resize(n, static_cast<Eigen::Index>(observables.size()));
  out.log_weights = Eigen::VectorXd::Zero(n);
  const Stream root(seed);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    Stream rng = root.split(i);
    const Path path = sample_stationary_exact(p, n_steps, rng);
    record(out.values, static_cast<Eigen::Index>(i), observables, Sample{path, log_exp_functional(path), path.min()});
  });
  return out;
}

ObservableSamples fp_is_sample(const std::vector<Observable>& observables, const RescaledParams& r, long n,
                               int n_steps, std::uint64_t seed) {
  require(n >= 1 && n_steps >= 2, "fp_is_sample: requires n >= 1 and n_steps >= 2");
  ObservableSamples out;
  out.values.resize(n, static_cast<Eigen::Index>(observables.size()));
  out.log_weights.resize(n);
  const Stream root(seed);
  const double dt = 1.0 / n_steps;
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    Stream rng = root.split(i);
    const Path path = sample_brownian(1.0, n_steps, 0.0, 0.5, rng);
    double m = 0.0;
    for (int k = 0; k < n_steps; ++k) m = std::min(m, sample_bridge_min(path.values(k), path.values(k + 1), dt, rng));
    const auto row = static_cast<Eigen::Index>(i);
    out.log_weights(row) = 2.0 * r.s() * m - 2.0 * r.v_t * path.end();
    record(out.values, row, observables, Sample{path, kNaN, m});
  });
  return out;
}

EstimateReport fp_is_estimate(const Observable& o, const RescaledParams& r, long n, int n_steps, std::uint64_t seed,
                              Normalization mode) {
  require(n >= 100, "fp_is_estimate: requires n >= 100");
  EstimateReport rep = summarize(fp_is_sample({o}, r, n, n_steps, seed), 0, mode);
  rep.method = Method::is;
  rep.seed = seed;
  rep.rescaled = r;
  rep.is_rescaled = true;
  return rep;
}

double sample_limit_endpoint(double u, double v, Stream& rng) {
  require(u > 0.0 && v > 0.0, "sample_limit_endpoint: requires u, v > 0");
  const double gv1 = rng.gamma(v), gv2 = rng.gamma(v), gu1 = rng.gamma(u), gu2 = rng.gamma(u);
  return -0.5 * (std::log(gv1) + std::log(gv2) - std::log(gu1) - std::log(gu2));
}

DeltaLimitReport verify_delta_limit(double a, double xi, const ModelParams& p, const std::vector<double>& L_seq,
                                    long n, double steps_per_unit, std::uint64_t seed) {
  require(a > 0.0 && xi > 0.0, "verify_delta_limit: requires a, xi > 0");
  require(!L_seq.empty() && std::is_sorted(L_seq.begin(), L_seq.end()), "verify_delta_limit: L_seq must increase");
  const double u = p.u, v = p.v;
  const bool r1 = u > 0.0 && v > 0.0;
  const bool r2 = u < 0.0 && u < v;
  const bool r3 = v < 0.0 && v < u;
  require(static_cast<int>(r1) + static_cast<int>(r2) + static_cast<int>(r3) == 1,
          "verify_delta_limit: parameters must lie strictly inside one region");
  DeltaLimitReport rep;
  rep.limit = delta_limit(p, a, xi, 0.0);
  const double w = p.w();
  const Observable f = [a, xi, w](const Sample& s) { return std::pow(a * std::exp(-s.log_z) + xi, -w); };
  if (std::abs(w + 1.0) < 1e-12) {
    rep.method = Method::exact;
  } else if (v < 0.0) {
    rep.method = Method::is;
  } else {
    rep.method = Method::mcmc;
  }
  for (std::size_t k = 0; k < L_seq.size(); ++k) {
    ModelParams q = p;
    q.L = L_seq[k];
    const int n_steps = std::max(64, static_cast<int>(std::lround(steps_per_unit * q.L)));
    EstimateReport e;
    switch (rep.method) {
      case Method::exact: e = summarize(exact_sample({f}, q, n, n_steps, seed + k), 0); break;
      case Method::is: e = summarize(is_sample({f}, q, n, n_steps, -v, seed), 0); break;
      case Method::mcmc: e = mcmc_estimate(f, q, n, n_steps, seed + k); break;
    }
    rep.points.push_back({q.L, e.value, e.std_err, std::abs(e.value - rep.limit)});
  }
  rep.monotone = true;
  for (std::size_t k = 1; k < rep.points.size(); ++k)
    if (!(rep.points[k].error < rep.points[k - 1].error)) rep.monotone = false;
  return rep;
}

IdelawReport verify_idelaw(double mu, double t, long n, int n_steps, std::uint64_t seed, double horizon,
                           double scalar_dt) {
  require(mu < 0.0 && t > 0.0, "verify_idelaw: requires mu < 0 and t > 0");
  require(n >= 100 && n_steps >= 2, "verify_idelaw: requires n >= 100 and n_steps >= 2");
  const Stream root(seed);
  Eigen::VectorXd transformed(n), direct(n), inverse_integral(n);
  std::vector<char> warn(static_cast<std::size_t>(n), 0);
  const int scalar_steps = std::max(2, static_cast<int>(std::lround(horizon / scalar_dt)));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    Stream rng = root.split(i);
    const auto row = static_cast<Eigen::Index>(i);
    const double g = rng.gamma(-mu);
    const Path b = sample_brownian(t, n_steps, -mu, 1.0, rng);
    transformed(row) = t_transform(b, 2.0 * g).end();
    direct(row) = mu * t + std::sqrt(t) * rng.gaussian();
    Path s = sample_brownian(horizon, scalar_steps, mu, 1.0, rng);
    s.values *= -1.0;
    const double log_i = log_exp_functional(s);
    inverse_integral(row) = std::exp(-log_i);
    const double log_tail = -2.0 * s.end() - std::log(-2.0 * mu);
    warn[i] = (log_tail - log_i > std::log(1e-6)) ? 1 : 0;
  });
  IdelawReport rep;
  rep.process = ks_two_sample(transformed, direct);
  const double shape = -mu;
  rep.scalar = ks_one_sample(inverse_integral, [shape](double x) { return x <= 0.0 ? 0.0 : gamma_p(shape, 0.5 * x); });
  for (char c : warn) rep.truncation_warnings += c;
  rep.passed = rep.process.statistic < 0.02 && rep.scalar.statistic < 0.02;
  return rep;
}

EndpointRatioSamples endpoint_ratio_samples(const ModelParams& p, long n, int n_steps, std::uint64_t seed) {
  EndpointRatioSamples out;
  if (std::abs(p.w() + 1.0) < 1e-12) {
    out.method = Method::exact;
    out.Y = exact_sample({obs::endpoint()}, p, n, n_steps, seed).values.col(0);
  } else {
    out.method = Method::mcmc;
    out.Y = mcmc_sample({obs::endpoint()}, p, n, n_steps, seed).values.col(0);
  }
  const Stream root(seed ^ 0x5bd1e995u);
  out.log_ratio.resize(n);
  for (long i = 0; i < n; ++i) {
    Stream rng = root.split(static_cast<std::uint64_t>(i));
    out.log_ratio(i) = std::sqrt(0.5 * p.L) * rng.gaussian() + out.Y(i);
  }
  return out;
}

}  // namespace kpz
