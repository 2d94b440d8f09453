#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlpca/types.hpp"

namespace nlpca {

/// Shortest decimal that parses back to exactly `value`.
std::string format_double(double value);

/// Header row, then one row per matrix row. A trailing `label` column is
/// appended when labels are given.
std::string format_csv(const Matrix& values, const std::vector<std::string>& columns,
                       const std::optional<std::vector<int>>& labels = std::nullopt);

void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& columns,
               const std::optional<std::vector<int>>& labels = std::nullopt);

/// Column names `prefix_1` .. `prefix_count`.
std::vector<std::string> numbered_columns(std::string_view prefix, Eigen::Index count);

struct CsvTable {
  std::vector<std::string> header;  // empty when the file has no header row
  Matrix values;
};

/// Numeric CSV. The first row is taken as a header when any field fails to
/// parse as a number. Errors name the 1-based line number.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace nlpca
