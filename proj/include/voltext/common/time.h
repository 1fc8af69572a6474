#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace voltext {

using Date = std::chrono::sys_days;
using Timestamp = std::chrono::sys_seconds;

// ISO-8601 with zone: 2016-10-26T13:45:00Z, 2016-10-26T09:45:00-04:00,
// fractional seconds are truncated. A bare date parses as midnight UTC.
Timestamp parse_timestamp(std::string_view text);
Date parse_date(std::string_view text);
std::string format_date(Date d);
std::string format_timestamp(Timestamp t);  // UTC, trailing Z

// US Eastern civil time. Daylight saving follows the federal rules in force
// since 2007 (second Sunday of March to first Sunday of November) and the
// 1987-2006 rules before that.
bool eastern_dst_in_effect(Timestamp utc);
Timestamp eastern_to_utc(Date local_date, std::chrono::minutes local_time);
Date eastern_date(Timestamp utc);
std::chrono::minutes eastern_time_of_day(Timestamp utc);

// A wall-clock instant in a named zone, e.g. 09:30 America/New_York.
struct LocalCutoff {
  std::chrono::minutes time_of_day{9 * 60 + 30};
  std::string zone = "America/New_York";

  Timestamp on(Date d) const;
  static LocalCutoff parse(std::string_view text);  // "09:30 America/New_York"
};

bool is_weekday(Date d);
Date next_weekday(Date d);

}  // namespace voltext
