#include "driftbench/csv.hpp"

#include <charconv>

#include "driftbench/errors.hpp"
#include "driftbench/fsio.hpp"

namespace driftbench::csvio {

namespace {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

Table read_csv(const std::filesystem::path& path) {
  const std::string content = fsio::read_file(path);
  Table table;
  std::size_t pos = 0, line_no = 0;
  while (pos <= content.size()) {
    std::size_t eol = content.find('\n', pos);
    const bool last = eol == std::string::npos;
    std::string_view line(content.data() + pos, (last ? content.size() : eol) - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (!line.empty()) {
      if (line_no == 1) {
        table.header = split_line(line);
      } else {
        Row row{split_line(line), line_no};
        if (row.fields.size() != table.header.size())
          throw Error(Errc::parse_error,
                      path.string() + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(table.header.size()) + " fields, got " +
                          std::to_string(row.fields.size()));
        table.rows.push_back(std::move(row));
      }
    } else if (!last) {
      // blank interior line: only tolerated at end of file
      std::size_t rest = content.find_first_not_of("\r\n", eol);
      if (rest != std::string::npos)
        throw Error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) +
                                           ": blank line inside table");
    }
    if (last) break;
    pos = eol + 1;
  }
  if (table.header.empty())
    throw Error(Errc::parse_error, path.string() + ": missing header row");
  return table;
}

void expect_header(const Table& table, const std::vector<std::string>& expected,
                   const std::filesystem::path& path) {
  if (table.header != expected) {
    std::string want;
    for (const auto& h : expected) {
      if (!want.empty()) want += ',';
      want += h;
    }
    throw Error(Errc::parse_error, path.string() + ": header must be '" + want + "'");
  }
}

std::int64_t parse_int(const std::string& field, std::size_t line_no,
                       std::string_view what) {
  std::int64_t value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": bad " +
                                       std::string(what) + " '" + field + "'");
  return value;
}

double parse_double(const std::string& field, std::size_t line_no,
                    std::string_view what) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": bad " +
                                       std::string(what) + " '" + field + "'");
  return value;
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace driftbench::csvio
