#include "voltext/common/time.h"

#include <charconv>
#include <cstdio>

#include "voltext/common/error.h"

namespace voltext {

using namespace std::chrono;

namespace {

int parse_int(std::string_view s, std::size_t pos, std::size_t len,
              std::string_view whole) {
  if (pos + len > s.size()) fail(ErrorCode::kFormatError, "bad timestamp '" + std::string(whole) + "'");
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
  if (ec != std::errc() || ptr != s.data() + pos + len) {
    fail(ErrorCode::kFormatError, "bad timestamp '" + std::string(whole) + "'");
  }
  return v;
}

Date make_date(int y, int m, int d, std::string_view whole) {
  year_month_day ymd{year{y}, month{unsigned(m)}, day{unsigned(d)}};
  if (!ymd.ok()) fail(ErrorCode::kFormatError, "invalid date '" + std::string(whole) + "'");
  return sys_days{ymd};
}

Date nth_sunday(int y, unsigned m, unsigned n) {
  return sys_days{year{y} / month{m} / weekday_indexed{Sunday, n}};
}

Date last_sunday(int y, unsigned m) {
  return sys_days{year{y} / month{m} / weekday_last{Sunday}};
}

bool is_eastern_zone(std::string_view zone) {
  return zone == "America/New_York" || zone == "US/Eastern" || zone == "ET" ||
         zone == "EST5EDT";
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
    fail(ErrorCode::kFormatError, "bad date '" + std::string(text) + "'");
  }
  return make_date(parse_int(text, 0, 4, text), parse_int(text, 5, 2, text),
                   parse_int(text, 8, 2, text), text);
}

Timestamp parse_timestamp(std::string_view text) {
  Date d = parse_date(text);
  if (text.size() == 10) return Timestamp{d};
  if (text[10] != 'T' && text[10] != ' ') {
    fail(ErrorCode::kFormatError, "bad timestamp '" + std::string(text) + "'");
  }
  int hh = parse_int(text, 11, 2, text);
  int mm = parse_int(text, 14, 2, text);
  int ss = 0;
  std::size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    ss = parse_int(text, 17, 2, text);
    pos = 19;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  }
  if (hh > 23 || mm > 59 || ss > 60) {
    fail(ErrorCode::kFormatError, "bad time of day '" + std::string(text) + "'");
  }
  Timestamp local = Timestamp{d} + hours{hh} + minutes{mm} + seconds{ss};
  if (pos == text.size()) {
    fail(ErrorCode::kFormatError, "timestamp without zone '" + std::string(text) + "'");
  }
  char z = text[pos];
  if (z == 'Z' && pos + 1 == text.size()) return local;
  if (z != '+' && z != '-') {
    fail(ErrorCode::kFormatError, "bad zone in '" + std::string(text) + "'");
  }
  int oh = parse_int(text, pos + 1, 2, text);
  std::size_t mpos = pos + 3;
  if (mpos < text.size() && text[mpos] == ':') ++mpos;
  int om = mpos < text.size() ? parse_int(text, mpos, 2, text) : 0;
  minutes offset{oh * 60 + om};
  return z == '+' ? local - offset : local + offset;
}

std::string format_date(Date d) {
  year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

std::string format_timestamp(Timestamp t) {
  Date d = floor<days>(t);
  auto s = (t - d).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02lld:%02lld:%02lldZ", format_date(d).c_str(),
                (long long)(s / 3600), (long long)(s / 60 % 60), (long long)(s % 60));
  return buf;
}

bool eastern_dst_in_effect(Timestamp utc) {
  int y = int(year_month_day{floor<days>(utc)}.year());
  Date start, end;
  if (y >= 2007) {
    start = nth_sunday(y, 3, 2);
    end = nth_sunday(y, 11, 1);
  } else {
    start = nth_sunday(y, 4, 1);
    end = last_sunday(y, 10);
  }
  // 02:00 EST = 07:00 UTC, 02:00 EDT = 06:00 UTC.
  Timestamp on = Timestamp{start} + hours{7};
  Timestamp off = Timestamp{end} + hours{6};
  return utc >= on && utc < off;
}

Timestamp eastern_to_utc(Date local_date, minutes local_time) {
  Timestamp as_edt = Timestamp{local_date} + local_time + hours{4};
  if (eastern_dst_in_effect(as_edt)) return as_edt;
  return Timestamp{local_date} + local_time + hours{5};
}

namespace {
Timestamp utc_to_eastern_wall(Timestamp utc) {
  return utc - (eastern_dst_in_effect(utc) ? hours{4} : hours{5});
}
}  // namespace

Date eastern_date(Timestamp utc) { return floor<days>(utc_to_eastern_wall(utc)); }

minutes eastern_time_of_day(Timestamp utc) {
  Timestamp wall = utc_to_eastern_wall(utc);
  return duration_cast<minutes>(wall - floor<days>(wall));
}

Timestamp LocalCutoff::on(Date d) const {
  if (is_eastern_zone(zone)) return eastern_to_utc(d, time_of_day);
  if (zone == "UTC" || zone == "Z") return Timestamp{d} + time_of_day;
  fail(ErrorCode::kConfigError, "unsupported time zone '" + zone + "'");
}

LocalCutoff LocalCutoff::parse(std::string_view text) {
  LocalCutoff c;
  if (text.size() < 5 || text[2] != ':') {
    fail(ErrorCode::kConfigError, "cutoff must look like 'HH:MM Zone'");
  }
  int hh = parse_int(text, 0, 2, text);
  int mm = parse_int(text, 3, 2, text);
  c.time_of_day = minutes{hh * 60 + mm};
  auto rest = text.substr(5);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  if (!rest.empty()) c.zone = std::string(rest);
  if (!is_eastern_zone(c.zone) && c.zone != "UTC" && c.zone != "Z") {
    fail(ErrorCode::kConfigError, "unsupported time zone '" + c.zone + "'");
  }
  return c;
}

bool is_weekday(Date d) {
  weekday w{d};
  return w != Saturday && w != Sunday;
}

Date next_weekday(Date d) {
  do {
    d += days{1};
  } while (!is_weekday(d));
  return d;
}

}  // namespace voltext
