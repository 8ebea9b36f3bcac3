#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kpz/paths.hpp"
#include "kpz/sampler.hpp"
#include "kpz/stats.hpp"

namespace kpz {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);

/// First line of every CSV: "# kpz <version> config=<16 hex digits>".
std::string csv_preamble(const std::string& config_text);

/// Writes the preamble, an optional comment line, a header and one row per matrix row.
void write_csv(std::ostream& os, const std::string& config_text, const std::vector<std::string>& columns,
               const Eigen::MatrixXd& rows, const std::string& comment = "");

/// Columns x, value.
void write_path_csv(std::ostream& os, const Path& p, const std::string& config_text);

/// Columns bin_left, bin_right, density, stderr.
void write_histogram_csv(std::ostream& os, const Histogram& h, const std::string& config_text);

/// Binary ensemble, little-endian: f64 L, u64 n_steps, u64 count, u64 seed,
/// then count·(n_steps+1) f64 values path by path.
void write_ensemble(std::ostream& os, const WeightedEnsemble& e, std::uint64_t seed);

struct EnsembleFile {
  WeightedEnsemble ensemble;
  std::uint64_t seed = 0;
};
EnsembleFile read_ensemble(std::istream& is);

/// {value, std_err, ess, n_total, method, seed, params, runtime_ms, ...}.
Json report_json(const EstimateReport& r, std::optional<double> runtime_ms = std::nullopt);

/// key=value lines; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_config(std::istream& is);

/// Fixed-precision rendering used by every text output ("%.17g").
std::string format_double(double x);

}  // namespace kpz
