#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace driftbench::timeutil {

// Civil-calendar conversions (proleptic Gregorian, UTC only).
std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

// "YYYY-MM-DDTHH:MM:SSZ" <-> seconds since the Unix epoch.
std::int64_t parse_iso8601_utc(std::string_view text);
std::string format_iso8601_utc(std::int64_t seconds);

// "YYYY-MM-DD" -> seconds at UTC midnight.
std::int64_t parse_date_utc(std::string_view text);
std::string format_date_utc(std::int64_t seconds);

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// UTC midnight of the day containing `seconds`.
inline std::int64_t day_start(std::int64_t seconds) {
  return floor_div(seconds, 86400) * 86400;
}

}  // namespace driftbench::timeutil
