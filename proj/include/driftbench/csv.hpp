#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace driftbench::csvio {

struct Row {
  std::vector<std::string> fields;
  std::size_t line_no = 0;  // 1-based, including the header line
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;
};

// Plain comma-separated files, no quoting (none of the formats here needs
// it). Blank trailing lines are ignored; every data row must match the
// header width.
Table read_csv(const std::filesystem::path& path);

void expect_header(const Table& table, const std::vector<std::string>& expected,
                   const std::filesystem::path& path);

// Field parsers that throw ParseError with the offending line number.
std::int64_t parse_int(const std::string& field, std::size_t line_no,
                       std::string_view what);
double parse_double(const std::string& field, std::size_t line_no,
                    std::string_view what);

// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace driftbench::csvio
