#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace tlq::io {

/// Formats with 17 significant digits so values round-trip exactly.
std::string format_double(double v);

/// Column-major table written as CSV with a fixed header line.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

std::string csv_string(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);

/// Reads a two-column numeric CSV (an optional non-numeric header line is skipped).
std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(
    const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace tlq::io
