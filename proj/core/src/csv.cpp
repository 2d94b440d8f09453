#include "nlpca/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "nlpca/error.hpp"

namespace nlpca {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::vector<std::string> numbered_columns(std::string_view prefix, Eigen::Index count) {
  std::vector<std::string> names;
  for (Eigen::Index k = 1; k <= count; ++k) names.push_back(std::string(prefix) + "_" + std::to_string(k));
  return names;
}

std::string format_csv(const Matrix& values, const std::vector<std::string>& columns,
                       const std::optional<std::vector<int>>& labels) {
  if (static_cast<Eigen::Index>(columns.size()) != values.cols() && values.rows() > 0) {
    throw InvalidArgument("CSV header has " + std::to_string(columns.size()) +
                          " names for " + std::to_string(values.cols()) + " columns");
  }
  if (labels && static_cast<Eigen::Index>(labels->size()) != values.rows()) {
    throw InvalidArgument("label count does not match row count");
  }
  std::string out;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (k) out += ',';
    out += columns[k];
  }
  if (labels) out += columns.empty() ? "label" : ",label";
  out += '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index k = 0; k < values.cols(); ++k) {
      if (k) out += ',';
      out += format_double(values(i, k));
    }
    if (labels) {
      out += ',';
      out += std::to_string((*labels)[static_cast<std::size_t>(i)]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& columns, const std::optional<std::vector<int>>& labels) {
  const std::string text = format_csv(values, columns, labels);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path.string() + " failed");
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    std::vector<double> row;
    bool numeric = true;
    for (auto field : fields) {
      auto value = parse_number(field);
      if (!value) {
        numeric = false;
        break;
      }
      row.push_back(*value);
    }
    if (!numeric) {
      if (rows.empty() && table.header.empty()) {
        for (auto field : fields) table.header.emplace_back(trim(field));
        width = fields.size();
        continue;
      }
      throw IoError("CSV line " + std::to_string(line_no) + ": non-numeric field");
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw IoError("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                    " fields, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < width; ++k) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

}  // namespace nlpca
