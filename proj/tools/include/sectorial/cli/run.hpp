#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "sectorial/cli/config.hpp"

namespace sectorial::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_domain = 3;
inline constexpr int exit_selftest = 4;
inline constexpr int exit_io = 5;

struct Report {
  json document = json::object();  // command, version, config, results, wall_times
  std::string csv;                 // curve or trace, empty when the command has none
};

/// Dispatches on config.command. Throws ConfigError for schema problems and
/// sectorial::Error for violated preconditions.
Report run(const ExperimentConfig& config);

/// The report with wall-times removed; equal across reruns of the same config.
json numerical_part(const json& report);

const char* library_version();

}  // namespace sectorial::cli
