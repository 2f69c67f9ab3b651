#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "djp/graph.hpp"

namespace djp::tools {

struct BenchRow {
  std::string instance;
  std::string algorithm;
  double value = 0.0;
  std::optional<double> lp_value;
  std::optional<int> oracle_value;
  int congestion = 0;
  double time_ms = 0.0;
  std::uint64_t seed = 0;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  int jobs = 1;
  /// Include instances that take minutes (Petersen).
  bool slow = false;
};

struct SuiteInstance {
  std::string name;
  Instance raw;
  Instance normalized;
  /// Run the oracle even beyond its guard.
  bool force_oracle = false;
};

/// Instances of a suite in a fixed order. Throws Error for an unknown suite.
[[nodiscard]] std::vector<SuiteInstance> suite_instances(const std::string& suite, const SuiteOptions& options);

/// Suites: gap, random, ndp, clique, coloring, all. Throws Error for an
/// unknown suite name.
[[nodiscard]] std::vector<BenchRow> run_suite(const std::string& suite, const SuiteOptions& options);
[[nodiscard]] std::vector<std::string> suite_names();

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows);

}  // namespace djp::tools
