#include "kpz/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

#include "kpz/error.hpp"

namespace kpz {

namespace {

template <typename T>
void put_le(std::ostream& os, T value) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  os.write(buf, sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  char buf[sizeof(T)];
  if (!is.read(buf, sizeof(T))) throw DomainError("read_ensemble: truncated input");
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string csv_preamble(const std::string& config_text) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(config_text)));
  return std::string("# kpz ") + kVersion + " config=" + buf;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(std::ostream& os, const std::string& config_text, const std::vector<std::string>& columns,
               const Eigen::MatrixXd& rows, const std::string& comment) {
  require(static_cast<Eigen::Index>(columns.size()) == rows.cols(), "write_csv: column count mismatch");
  os << csv_preamble(config_text) << '\n';
  if (!comment.empty()) os << "# " << comment << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) os << (c ? "," : "") << format_double(rows(i, c));
    os << '\n';
  }
}

void write_path_csv(std::ostream& os, const Path& p, const std::string& config_text) {
  Eigen::MatrixXd rows(p.values.size(), 2);
  rows.col(0) = Eigen::VectorXd::LinSpaced(p.values.size(), 0.0, p.L);
  rows.col(1) = p.values;
  write_csv(os, config_text, {"x", "value"}, rows);
}

void write_histogram_csv(std::ostream& os, const Histogram& h, const std::string& config_text) {
  const Eigen::Index bins = h.density.size();
  Eigen::MatrixXd rows(bins, 4);
  rows.col(0) = h.edges.head(bins);
  rows.col(1) = h.edges.tail(bins);
  rows.col(2) = h.density;
  rows.col(3) = h.std_err;
  write_csv(os, config_text, {"bin_left", "bin_right", "density", "stderr"}, rows);
}

void write_ensemble(std::ostream& os, const WeightedEnsemble& e, std::uint64_t seed) {
  put_le<double>(os, e.L);
  put_le<std::uint64_t>(os, static_cast<std::uint64_t>(e.n_steps()));
  put_le<std::uint64_t>(os, static_cast<std::uint64_t>(e.count()));
  put_le<std::uint64_t>(os, seed);
  for (Eigen::Index j = 0; j < e.count(); ++j)
    for (Eigen::Index i = 0; i <= e.n_steps(); ++i) put_le<double>(os, e.values(i, j));
}

EnsembleFile read_ensemble(std::istream& is) {
  EnsembleFile f;
  f.ensemble.L = get_le<double>(is);
  const auto n = static_cast<Eigen::Index>(get_le<std::uint64_t>(is));
  const auto count = static_cast<Eigen::Index>(get_le<std::uint64_t>(is));
  f.seed = get_le<std::uint64_t>(is);
  f.ensemble.values.resize(n + 1, count);
  for (Eigen::Index j = 0; j < count; ++j)
    for (Eigen::Index i = 0; i <= n; ++i) f.ensemble.values(i, j) = get_le<double>(is);
  f.ensemble.log_weights = Eigen::VectorXd::Zero(count);
  return f;
}

Json report_json(const EstimateReport& r, std::optional<double> runtime_ms) {
  Json j;
  j["value"] = r.value;
  j["std_err"] = r.std_err;
  j["ess"] = r.ess;
  j["n_total"] = r.n_total;
  j["method"] = to_string(r.method);
  j["seed"] = r.seed;
  if (r.is_rescaled) {
    j["params"] = {{"u_tilde", r.rescaled.u_t}, {"v_tilde", r.rescaled.v_t}};
  } else {
    j["params"] = {{"u", r.params.u}, {"v", r.params.v}, {"L", r.params.L}};
  }
  j["runtime_ms"] = runtime_ms ? Json(*runtime_ms) : Json(nullptr);
  j["degenerate"] = r.degenerate;
  if (r.method == Method::mcmc) {
    j["acceptance"] = r.acceptance;
    j["tau"] = r.tau;
    j["burn_in"] = r.burn_in;
  }
  return j;
}

std::map<std::string, std::string> parse_config(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, "config line " + std::to_string(lineno) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

}  // namespace kpz
