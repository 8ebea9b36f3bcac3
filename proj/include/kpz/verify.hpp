#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kpz/io.hpp"

namespace kpz {

struct CheckResult {
  std::string name;
  bool passed = false;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string detail;
  bool informational = false;  ///< reported but never counted as a failure
};

struct VerifyOptions {
  double scale = 1.0;  ///< multiplies every sample count; quick mode uses 0.1
  std::uint64_t seed = 1;
  std::vector<std::string> only;  ///< empty runs everything

  long scaled(long n) const;
};

struct NamedCheck {
  std::string name;
  std::string group;
  std::function<std::vector<CheckResult>(const VerifyOptions&)> run;
};

/// Every check of the battery, in a fixed order.
const std::vector<NamedCheck>& check_registry();

struct BatteryResult {
  Json report;
  bool all_passed = true;
};

/// Runs the selected checks. Check names and group names are both accepted by
/// VerifyOptions::only. Exceptions inside a check are reported as failures.
BatteryResult run_battery(const VerifyOptions& opt);

Json to_json(const CheckResult& c);

}  // namespace kpz
