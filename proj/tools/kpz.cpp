// Command-line front end: analytic tables, sampling runs, Laplace transforms
// and the verification battery.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kpz/analytic.hpp"
#include "kpz/error.hpp"
#include "kpz/io.hpp"
#include "kpz/lqm.hpp"
#include "kpz/parallel.hpp"
#include "kpz/sampler.hpp"
#include "kpz/stats.hpp"
#include "kpz/verify.hpp"

using namespace kpz;

namespace {

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;

  bool empty() const { return n == 0; }
  double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

Grid parse_grid(const std::string& text) {
  Grid g;
  if (text.empty()) return g;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.n) || c1 != ':' || c2 != ':' || g.n < 1)
    throw DomainError("grid must look like lo:hi:count, got '" + text + "'");
  return g;
}

/// Output stream for a path, or stdout when the path is empty or "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw DomainError("cannot open " + path + " for writing");
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct Common {
  double u = 0.0, v = 0.0, L = 1.0;
  double u_t = 0.0, v_t = 0.0;
  std::string out;
};

void add_params(CLI::App* cmd, Common& c) {
  cmd->add_option("--u", c.u, "boundary parameter at x=0");
  cmd->add_option("--v", c.v, "boundary parameter at x=L");
  cmd->add_option("--L", c.L, "interval length")->check(CLI::PositiveNumber);
  cmd->add_option("--u-tilde", c.u_t, "rescaled u");
  cmd->add_option("--v-tilde", c.v_t, "rescaled v");
  cmd->add_option("-o,--out", c.out, "output file (default stdout)");
}

// --- analytic ---------------------------------------------------------------

struct AnalyticArgs {
  std::string formula;
  std::string grid;
  int order = 1;
  double k = 1.0;
  double c = 0.0;
  double a = 1.0, xi = 1.0;
};

int cmd_analytic(const Common& cm, const AnalyticArgs& a, const std::string& config) {
  const ModelParams p{cm.u, cm.v, cm.L};
  const RescaledParams r{cm.u_t, cm.v_t};
  using Fn = std::function<double(double)>;
  const std::map<std::string, std::pair<Fn, std::string>> table{
      {"norm_Z", {[&](double) { return norm_Z(p); }, ""}},
      {"log_norm_Z", {[&](double) { return log_norm_Z(p); }, ""}},
      {"pdf_Y", {[&](double y) { return pdf_Y(p, y); }, "Y"}},
      {"cumulant_Y", {[&](double) { return cumulant_Y(p, a.order); }, ""}},
      {"mean_profile", {[&](double x) { return mean_profile(p, x); }, "x"}},
      {"scaling_profile", {[&](double x) { return scaling_profile(r.v_t, x); }, "x_tilde"}},
      {"moment_Z", {[&](double) { return moment_Z(p, a.k); }, ""}},
      {"laplace_finite", {[&](double c) { return laplace_finite(p, c); }, "c"}},
      {"laplace_limit", {[&](double c) { return laplace_limit(p.u, p.v, c); }, "c"}},
      {"fp_norm", {[&](double) { return fp_norm(r); }, ""}},
      {"fp_pdf_Y", {[&](double y) { return fp_pdf_Y(r, y); }, "Y"}},
      {"fp_laplace", {[&](double c) { return fp_laplace(r, c); }, "c"}},
      {"fp_min_end_pdf", {[&](double y) { return fp_min_end_pdf(r, y, a.c); }, "min"}},
      {"ew_mean_profile", {[&](double x) { return ew_mean_profile(r, x); }, "x_tilde"}},
      {"delta_limit", {[&](double x) { return delta_limit(p, a.a, a.xi, x); }, "x"}},
  };
  const auto it = table.find(a.formula);
  if (it == table.end()) {
    std::string names;
    for (const auto& [name, entry] : table) names += (names.empty() ? "" : ", ") + name;
    throw DomainError("unknown formula '" + a.formula + "'; closed-form families: " + names);
  }
  const auto& [fn, arg] = it->second;
  const Grid g = parse_grid(a.grid);
  Sink sink(cm.out);
  if (arg.empty() || g.empty()) {
    if (!arg.empty()) throw DomainError(a.formula + " needs --grid over " + arg);
    Eigen::MatrixXd rows(1, 1);
    rows(0, 0) = fn(0.0);
    write_csv(sink.get(), config, {"value"}, rows, "formula=" + a.formula);
    return 0;
  }
  Eigen::MatrixXd rows(g.n, 2);
  for (int i = 0; i < g.n; ++i) {
    rows(i, 0) = g.at(i);
    rows(i, 1) = fn(rows(i, 0));
  }
  write_csv(sink.get(), config, {arg, "value"}, rows, "formula=" + a.formula);
  return 0;
}

// --- sample -----------------------------------------------------------------

struct SampleArgs {
  std::string measure = "interval";
  std::string method = "is";
  std::string observable = "endpoint";
  std::string histogram;
  std::string histogram_out;
  std::string ensemble;
  long n = 10000;
  int n_steps = 256;
  std::optional<std::uint64_t> seed;
  std::optional<double> base_drift;
  int bins = 50;
  double lo = -4.0, hi = 4.0;
  double x_max = 20.0;
  bool record_runtime = false;
};

Observable parse_observable(const std::string& name) {
  if (name == "endpoint") return obs::endpoint();
  if (name == "endpoint2") return obs::endpoint_power(2);
  if (name == "z") return obs::z_power(1.0);
  if (name == "inverse_z") return obs::inverse_z();
  if (name == "min") return obs::minimum();
  if (name == "one") return obs::constant();
  if (name.rfind("value_at:", 0) == 0) return obs::value_at(std::stod(name.substr(9)));
  throw DomainError("unknown observable '" + name + "' (endpoint, endpoint2, z, inverse_z, min, one, value_at:x)");
}

int cmd_sample(const Common& cm, const SampleArgs& a, const std::string& config) {
  if (!a.seed) throw DomainError("sample requires --seed");
  const std::uint64_t seed = *a.seed;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&]() -> std::optional<double> {
    if (!a.record_runtime) return std::nullopt;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };
  Sink sink(cm.out);
  const ModelParams p{cm.u, cm.v, cm.L};
  const RescaledParams r{cm.u_t, cm.v_t};

  if (a.measure == "hy-high-density" || a.measure == "hy-max-current") {
    const bool high = a.measure == "hy-high-density";
    const Stream root(seed);
    WeightedEnsemble e;
    e.L = a.x_max;
    e.params = p;
    e.values = sample_columns(a.n, a.n_steps, root, [&](Stream& s) {
      return high ? sample_hy_high_density(p.u, p.v, a.x_max, a.n_steps, s) : sample_hy_max_current(p.u, a.x_max, a.n_steps, s);
    });
    e.log_weights = Eigen::VectorXd::Zero(a.n);
    const Eigen::Index i0 = a.n_steps / 2, m = a.n_steps - i0 + 1;
    const Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(m, 0.5 * a.x_max, a.x_max);
    Eigen::VectorXd slopes(a.n);
    for (Eigen::Index j = 0; j < a.n; ++j) {
      const Eigen::VectorXd y = e.values.col(j).tail(m);
      slopes(j) = ((xs.array() - xs.mean()) * (y.array() - y.mean())).sum() / (xs.array() - xs.mean()).square().sum();
    }
    if (!a.ensemble.empty()) {
      std::ofstream f(a.ensemble, std::ios::binary);
      write_ensemble(f, e, seed);
    }
    Json j;
    j["measure"] = a.measure;
    j["slope"] = slopes.mean();
    j["std_err"] = a.n > 1 ? std::sqrt((slopes.array() - slopes.mean()).square().sum() / (a.n - 1.0) / a.n) : 0.0;
    j["fit_range"] = {0.5 * a.x_max, a.x_max};
    j["n_total"] = a.n;
    j["seed"] = seed;
    j["params"] = {{"u", p.u}, {"v", p.v}};
    const auto rt = elapsed();
    j["runtime_ms"] = rt ? Json(*rt) : Json(nullptr);
    sink.get() << j.dump(2) << '\n';
    return 0;
  }

  std::vector<Observable> observables{parse_observable(a.observable)};
  const bool want_hist = !a.histogram.empty();
  if (want_hist) observables.push_back(parse_observable(a.histogram));

  EstimateReport rep;
  ObservableSamples samples;
  double mcmc_beta = 0.5;
  if (a.measure == "interval") {
    if (a.method == "mcmc") {
      const McmcResult m = mcmc_sample(observables, p, a.n, a.n_steps, seed);
      samples.values = m.values;
      samples.log_weights = Eigen::VectorXd::Zero(m.values.rows());
      rep = summarize(samples, 0);
      const double tau = m.tau_observables(0);
      rep.std_err *= std::sqrt(tau);
      rep.ess /= tau;
      rep.method = Method::mcmc;
      rep.acceptance = m.acceptance;
      rep.tau = tau;
      rep.burn_in = m.burn_in;
      mcmc_beta = m.beta;
      rep.degenerate = rep.ess < 0.01 * rep.n_total;
    } else if (a.method == "exact") {
      samples = exact_sample(observables, p, a.n, a.n_steps, seed);
      rep = summarize(samples, 0);
      rep.method = Method::exact;
    } else if (a.method == "is") {
      samples = is_sample(observables, p, a.n, a.n_steps, a.base_drift.value_or(-p.v), seed);
      rep = summarize(samples, 0);
      rep.method = Method::is;
    } else {
      throw DomainError("unknown method '" + a.method + "' (is, mcmc, exact)");
    }
    rep.params = p;
    if (!a.ensemble.empty()) {
      WeightedEnsemble e;
      if (a.method == "mcmc") {
        e = mcmc_chain(p, a.n, a.n_steps, mcmc_beta, seed);
      } else if (a.method == "exact") {
        e.L = p.L;
        e.params = p;
        e.values = sample_columns(a.n, a.n_steps, Stream(seed),
                                  [&](Stream& s) { return sample_stationary_exact(p, a.n_steps, s); });
        e.log_weights = Eigen::VectorXd::Zero(a.n);
      } else {
        throw DomainError("--ensemble stores unweighted paths; use --method mcmc or exact");
      }
      std::ofstream f(a.ensemble, std::ios::binary);
      write_ensemble(f, e, seed);
    }
  } else if (a.measure == "fixed-point") {
    if (!a.ensemble.empty()) throw DomainError("--ensemble is not available for importance-weighted fixed-point samples");
    samples = fp_is_sample(observables, r, a.n, a.n_steps, seed);
    rep = summarize(samples, 0);
    rep.method = Method::is;
    rep.rescaled = r;
    rep.is_rescaled = true;
  } else {
    throw DomainError("unknown measure '" + a.measure + "' (interval, fixed-point, hy-high-density, hy-max-current)");
  }
  rep.seed = seed;

  if (want_hist) {
    const Histogram h = weighted_histogram(samples.values.col(1), samples.log_weights, a.lo, a.hi, a.bins);
    Sink hs(a.histogram_out);
    write_histogram_csv(hs.get(), h, config);
  }
  Json j = report_json(rep, elapsed());
  j["observable"] = a.observable;
  sink.get() << j.dump(2) << '\n';
  if (rep.degenerate) {
    std::cerr << "kpz: effective sample size " << rep.ess << " is below 1% of " << rep.n_total << '\n';
    return static_cast<int>(ExitCode::degenerate);
  }
  return 0;
}

// --- laplace ----------------------------------------------------------------

struct LaplaceArgs {
  std::string kind = "finite";
  std::vector<double> points;
  std::vector<double> s;
  std::string c_grid;
};

int cmd_laplace(const Common& cm, const LaplaceArgs& a, const std::string& config) {
  const ModelParams p{cm.u, cm.v, cm.L};
  const RescaledParams r{cm.u_t, cm.v_t};
  Sink sink(cm.out);
  if (a.kind == "J" || a.kind == "J_fp") {
    // rows: value and error at s, plus the ratio to s = 0
    double value, err, ratio;
    if (a.kind == "J") {
      const LaplaceQuery q{a.points, a.s, p};
      const QuadResult res = require_converged(laplace_J(q), "laplace_J");
      value = res.value;
      err = res.abs_err;
      ratio = laplace_J_ratio(q);
    } else {
      const LaplaceQueryFP q{a.points, a.s, r};
      const QuadResult res = require_converged(laplace_J_fp(q), "laplace_J_fp");
      value = res.value;
      err = res.abs_err;
      ratio = laplace_J_fp_ratio(q);
    }
    Eigen::MatrixXd rows(1, 3);
    rows << value, err, ratio;
    write_csv(sink.get(), config, {"value", "abs_err", "ratio"}, rows, "kind=" + a.kind);
    return 0;
  }
  const Grid g = parse_grid(a.c_grid.empty() ? "0:0:1" : a.c_grid);
  std::function<double(double)> fn;
  if (a.kind == "finite") {
    fn = [&](double c) { return laplace_finite(p, c); };
  } else if (a.kind == "limit") {
    fn = [&](double c) { return laplace_limit(p.u, p.v, c); };
  } else if (a.kind == "fp") {
    fn = [&](double c) { return fp_laplace(r, c); };
  } else {
    throw DomainError("unknown kind '" + a.kind + "' (J, J_fp, finite, limit, fp)");
  }
  Eigen::MatrixXd rows(g.n, 2);
  for (int i = 0; i < g.n; ++i) {
    rows(i, 0) = g.at(i);
    rows(i, 1) = fn(rows(i, 0));
  }
  write_csv(sink.get(), config, {"c", "value"}, rows, "kind=" + a.kind);
  return 0;
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
  bool quick = false;
  std::vector<std::string> only;
  std::uint64_t seed = 1;
};

int cmd_verify(const Common& cm, const VerifyArgs& a) {
  VerifyOptions opt;
  opt.scale = a.quick ? 0.1 : 1.0;
  opt.seed = a.seed;
  opt.only = a.only;
  const BatteryResult res = run_battery(opt);
  Json report = res.report;
  report["quick"] = a.quick;
  Sink sink(cm.out);
  sink.get() << report.dump(2) << '\n';
  if (a.quick) return 0;
  return res.all_passed ? 0 : 1;
}

/// Splices key=value lines from --config FILE in front of the subcommand's own
/// arguments, so that later command-line flags override them. The result is in
/// the reversed order CLI::App::parse(std::vector) expects.
std::vector<std::string> expand_config(int argc, char** argv, const std::vector<std::string>& subcommands) {
  std::vector<std::string> in(argv + 1, argv + argc);
  std::vector<std::string> config_args;
  for (std::size_t i = 0; i < in.size(); ++i) {
    std::string path;
    if (in[i] == "--config" && i + 1 < in.size()) {
      path = in[i + 1];
      in.erase(in.begin() + i, in.begin() + i + 2);
    } else if (in[i].rfind("--config=", 0) == 0) {
      path = in[i].substr(9);
      in.erase(in.begin() + i);
    } else {
      continue;
    }
    std::ifstream f(path);
    if (!f) throw DomainError("cannot read config file " + path);
    for (const auto& [key, value] : parse_config(f)) config_args.push_back("--" + key + "=" + value);
    break;
  }
  auto sub = std::find_if(in.begin(), in.end(), [&](const std::string& a) {
    return std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end();
  });
  if (sub != in.end()) in.insert(sub + 1, config_args.begin(), config_args.end());
  std::reverse(in.begin(), in.end());
  return in;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary measures of the KPZ equation on an interval: formulas, samplers and checks", "kpz"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_file;
  app.add_option("--config", config_file, "key=value configuration file; command-line flags take precedence");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: KPZ_THREADS or hardware)")->check(CLI::NonNegativeNumber);

  Common common;
  AnalyticArgs aa;
  auto* analytic = app.add_subcommand("analytic", "tabulate a closed-form observable");
  add_params(analytic, common);
  analytic->add_option("--formula", aa.formula, "formula name")->required();
  analytic->add_option("--grid", aa.grid, "argument grid lo:hi:count");
  analytic->add_option("--order", aa.order, "cumulant order");
  analytic->add_option("--k", aa.k, "moment order of Z");
  analytic->add_option("--end", aa.c, "endpoint value for fp_min_end_pdf");
  analytic->add_option("--a", aa.a, "a in delta_limit");
  analytic->add_option("--xi", aa.xi, "xi in delta_limit");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Monte Carlo estimates and path ensembles");
  add_params(sample, common);
  sample->add_option("--measure", sa.measure, "interval, fixed-point, hy-high-density, hy-max-current");
  sample->add_option("--method", sa.method, "is, mcmc or exact (interval measure)");
  sample->add_option("--observable", sa.observable, "endpoint, endpoint2, z, inverse_z, min, one, value_at:x");
  sample->add_option("--histogram", sa.histogram, "observable to histogram");
  sample->add_option("--histogram-out", sa.histogram_out, "histogram CSV file (default stdout)");
  sample->add_option("--bins", sa.bins)->check(CLI::PositiveNumber);
  sample->add_option("--range-lo", sa.lo);
  sample->add_option("--range-hi", sa.hi);
  sample->add_option("--ensemble", sa.ensemble, "binary ensemble output (half-line measures)");
  sample->add_option("--n", sa.n, "number of samples")->check(CLI::PositiveNumber);
  sample->add_option("--n-steps", sa.n_steps, "grid steps per path")->check(CLI::Range(2, 1 << 24));
  sample->add_option("--seed", sa.seed, "random seed");
  sample->add_option("--base-drift", sa.base_drift, "importance-sampling base drift (default -v)");
  sample->add_option("--x-max", sa.x_max, "half-line truncation")->check(CLI::PositiveNumber);
  sample->add_flag("--record-runtime", sa.record_runtime, "store wall-clock time in runtime_ms");

  LaplaceArgs la;
  auto* laplace = app.add_subcommand("laplace", "Laplace transforms");
  add_params(laplace, common);
  laplace->add_option("--kind", la.kind, "J, J_fp, finite, limit, fp");
  laplace->add_option("--points", la.points, "interior points x_1 < ... < x_m");
  laplace->add_option("--s", la.s, "Laplace parameters s_1 >= ... >= s_m");
  laplace->add_option("--c-grid", la.c_grid, "c grid lo:hi:count");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the cross-check battery and print a JSON report");
  verify->add_flag("--quick", va.quick, "ten times fewer samples; exit status is informational");
  verify->add_option("--only", va.only, "check or group names");
  verify->add_option("--seed", va.seed, "base seed");
  verify->add_option("-o,--out", common.out, "output file (default stdout)");

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv, {"analytic", "sample", "laplace", "verify"});
  } catch (const Error& e) {
    std::cerr << "kpz: " << e.what() << '\n';
    return static_cast<int>(e.code());
  }
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::invalid_params);
  }
  if (threads > 0) set_thread_count(threads);
  const std::string config = app.config_to_str(true, false);

  try {
    if (*analytic) return cmd_analytic(common, aa, config);
    if (*sample) return cmd_sample(common, sa, config);
    if (*laplace) return cmd_laplace(common, la, config);
    if (*verify) return cmd_verify(common, va);
  } catch (const Error& e) {
    std::cerr << "kpz: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::invalid_argument& e) {
    std::cerr << "kpz: " << e.what() << '\n';
    return static_cast<int>(ExitCode::invalid_params);
  }
  return 0;
}
