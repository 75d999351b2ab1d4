#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace sectorial {

enum class SearchMode { Exhaustive, Randomized };

inline const char* to_string(SearchMode m) {
  return m == SearchMode::Exhaustive ? "exhaustive" : "randomized";
}

/// Result of a maximization-type estimator: the value, the configuration
/// that attains it, and how it was found.
struct BoundEstimate {
  double value = 0.0;
  nlohmann::json witness = nlohmann::json::object();
  std::string method;
  SearchMode mode = SearchMode::Exhaustive;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  bool is_lower_bound = true;
  nlohmann::json details = nlohmann::json::object();
};

void to_json(nlohmann::json& j, const BoundEstimate& b);

}  // namespace sectorial
