#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sectorial::cli {

struct SelftestOptions {
  std::uint64_t seed = 42;
  /// Relative perturbation of every quadrature weight; nonzero only to check
  /// that the suite notices.
  double weight_perturbation = 0.0;
};

struct SelftestCase {
  std::string id;
  bool passed = false;
  double metric = 0.0;  // error or measured value, compared against tolerance
  double tolerance = 0.0;
  std::string note;
};

struct SelftestReport {
  std::vector<SelftestCase> cases;
  double seconds = 0.0;

  bool passed() const;
  std::vector<std::string> failures() const;
};

SelftestReport selftest(const SelftestOptions& options = {});

/// Fixed-width pass/fail table; deterministic for a given report.
std::string format_table(const SelftestReport& r);
nlohmann::json to_json(const SelftestReport& r, const SelftestOptions& options);

}  // namespace sectorial::cli
