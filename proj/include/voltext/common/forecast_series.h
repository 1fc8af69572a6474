#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "voltext/common/time.h"

namespace voltext {

// Aligned actual/forecast RV pairs for one ticker and one model.
struct ForecastSeries {
  std::string ticker;
  std::string model_id;
  std::vector<Date> dates;
  std::vector<double> actual;
  std::vector<double> forecast;

  std::size_t size() const { return dates.size(); }
  void push_back(Date d, double a, double f) {
    dates.push_back(d);
    actual.push_back(a);
    forecast.push_back(f);
  }
  // Throws ShapeMismatch when the three columns disagree in length.
  void validate() const;
};

// CSV `date,actual_rv,forecast_rv,model_id`.
void write_forecast_csv(const ForecastSeries& s, const std::filesystem::path& path);
ForecastSeries read_forecast_csv(const std::filesystem::path& path,
                                 const std::string& ticker = "");

}  // namespace voltext
