#include "driftbench/timeutil.hpp"

#include <charconv>
#include <cstdio>

#include "driftbench/errors.hpp"

namespace driftbench::timeutil {

namespace {

int parse_fixed_int(std::string_view text, std::size_t pos, std::size_t len) {
  int value = 0;
  const char* first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc{} || ptr != first + len)
    throw Error(Errc::parse_error, "bad numeric field in timestamp: " + std::string(text));
  return value;
}

}  // namespace

std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, int& month, int& day) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  year = static_cast<int>(y + (month <= 2));
}

std::int64_t parse_iso8601_utc(std::string_view text) {
  // Strict layout: YYYY-MM-DDTHH:MM:SSZ
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':' || text[19] != 'Z')
    throw Error(Errc::parse_error,
                "timestamp must look like 2023-06-01T09:00:00Z, got: " +
                    std::string(text));
  const int y = parse_fixed_int(text, 0, 4);
  const int mo = parse_fixed_int(text, 5, 2);
  const int d = parse_fixed_int(text, 8, 2);
  const int h = parse_fixed_int(text, 11, 2);
  const int mi = parse_fixed_int(text, 14, 2);
  const int s = parse_fixed_int(text, 17, 2);
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60)
    throw Error(Errc::parse_error, "timestamp field out of range: " + std::string(text));
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_iso8601_utc(std::int64_t seconds) {
  int y, mo, d;
  civil_from_days(floor_div(seconds, 86400), y, mo, d);
  const std::int64_t rem = seconds - day_start(seconds);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, mo, d,
                static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                static_cast<int>(rem % 60));
  return buf;
}

std::int64_t parse_date_utc(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw Error(Errc::parse_error,
                "date must look like 2023-06-01, got: " + std::string(text));
  const int y = parse_fixed_int(text, 0, 4);
  const int mo = parse_fixed_int(text, 5, 2);
  const int d = parse_fixed_int(text, 8, 2);
  if (mo < 1 || mo > 12 || d < 1 || d > 31)
    throw Error(Errc::parse_error, "date field out of range: " + std::string(text));
  return days_from_civil(y, mo, d) * 86400;
}

std::string format_date_utc(std::int64_t seconds) {
  int y, mo, d;
  civil_from_days(floor_div(seconds, 86400), y, mo, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, mo, d);
  return buf;
}

}  // namespace driftbench::timeutil
