#pragma once

#include <string>

namespace sectorial::cli {

std::string read_file(const std::string& path);

/// Writes through a sibling temp file and renames it into place.
void write_atomic(const std::string& path, const std::string& contents);

/// "out/report.json" -> "out/report.csv".
std::string csv_path_for(const std::string& path);

}  // namespace sectorial::cli
