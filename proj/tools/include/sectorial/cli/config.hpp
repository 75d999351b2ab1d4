#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sectorial/contour.hpp"
#include "sectorial/functions.hpp"
#include "sectorial/norm.hpp"
#include "sectorial/types.hpp"

namespace sectorial::cli {

using nlohmann::json;

/// Schema problems: malformed JSON, missing or mistyped fields, missing seeds.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string command;
  json body = json::object();  // the parsed document, seed override applied
  std::optional<std::uint64_t> seed;
  int refine = 0;

  /// The experiment seed; ConfigError naming `what` when none was given.
  std::uint64_t require_seed(const std::string& what) const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& command,
                              std::optional<std::uint64_t> seed_override = std::nullopt, int refine = 0);

// Field access with schema errors that name the offending key.
const json& field(const json& j, const std::string& key);
double number(const json& j, const std::string& key);
double number_or(const json& j, const std::string& key, double fallback);
int integer_or(const json& j, const std::string& key, int fallback);
std::vector<double> numbers(const json& j, const std::string& key);

/// Operator specs:
///   {"matrix": [[..]]}                       rows of numbers or [re, im]
///   {"matrix": {"re": [[..]], "im": [[..]]}}
///   {"diagonal": [..]}
///   {"jordan": {"eigenvalue": z, "size": n}} or {"jordan": [{..}, ..]} for blocks
Matrix operator_from_config(const json& spec);

/// {"random_commuting_pair": {"dim": d, "seed": s, "condition": k,
///   "a": [..], "b": [..], "angle_a": .., "angle_b": ..}} or {"A": op, "B": op}.
/// Eigenvalues not listed are drawn from the seed inside the given angles.
std::pair<Matrix, Matrix> pair_from_config(const json& spec);

/// Like the core norm JSON with the dimension optional (taken from `dim`).
NormSpec norm_from_config(const json& spec, Eigen::Index dim);

ContourSpec contour_from_config(const json& spec);
ScalarFunction function_from_config(const json& spec);

}  // namespace sectorial::cli
