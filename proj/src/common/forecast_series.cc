#include "voltext/common/forecast_series.h"

#include <cstdio>
#include <fstream>

#include "voltext/common/csv.h"
#include "voltext/common/error.h"

namespace voltext {

void ForecastSeries::validate() const {
  if (actual.size() != dates.size() || forecast.size() != dates.size()) {
    fail(ErrorCode::kShapeMismatch, "forecast series '" + model_id + "' has ragged columns");
  }
}

void write_forecast_csv(const ForecastSeries& s, const std::filesystem::path& path) {
  s.validate();
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << "date,actual_rv,forecast_rv,model_id\n";
  char buf[64];
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_date(s.dates[i]);
    std::snprintf(buf, sizeof buf, ",%.17g", s.actual[i]);
    out << buf;
    std::snprintf(buf, sizeof buf, ",%.17g", s.forecast[i]);
    out << buf << ',' << s.model_id << '\n';
  }
}

ForecastSeries read_forecast_csv(const std::filesystem::path& path,
                                 const std::string& ticker) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot read " + path.string());
  ForecastSeries s;
  s.ticker = ticker;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (lineno == 1 && line.rfind("date", 0) == 0) continue;
    auto f = split_line(line, ',');
    if (f.size() < 3) {
      fail(ErrorCode::kFormatError, path.string() + ":" + std::to_string(lineno));
    }
    s.push_back(parse_date(f[0]), parse_double(f[1]), parse_double(f[2]));
    if (f.size() > 3 && s.model_id.empty()) s.model_id = f[3];
  }
  return s;
}

}  // namespace voltext
