#include "voltext/volatility/rolling.h"

#include <algorithm>
#include <exception>

#include "voltext/common/error.h"
#include "voltext/volatility/ols.h"

namespace voltext::volatility {

double insanity_filter(double forecast, std::span<const double> train_rvs) {
  if (train_rvs.empty()) fail(ErrorCode::kInvalidArgument, "empty training window");
  auto [lo, hi] = std::minmax_element(train_rvs.begin(), train_rvs.end());
  if (forecast >= *lo && forecast <= *hi) return forecast;
  double s = 0.0;
  for (double v : train_rvs) s += v;
  return s / double(train_rvs.size());
}

ForecastSeries rolling_forecast(std::span<const DailyVolRecord> records, const HarSpec& spec,
                                const RollingProtocol& protocol, Exec exec,
                                RollingDiagnostics* diag) {
  const std::size_t n = records.size();
  const std::size_t need = protocol.train_len + protocol.oos_len + spec.min_history();
  if (protocol.train_len == 0 || protocol.oos_len == 0) {
    fail(ErrorCode::kInvalidArgument, "train_len and oos_len must be positive");
  }
  if (n < need) {
    fail(ErrorCode::kInsufficientHistory,
         std::to_string(n) + " records, need " + std::to_string(need));
  }
  // Features of day j forecast day j+1.
  const std::size_t first_feature = spec.min_history() - 1;
  std::vector<std::vector<double>> feats(n);
  for (std::size_t j = first_feature; j + 1 < n; ++j) feats[j] = build_har_features(records, spec, j);
  const std::size_t k = feats[first_feature].size();
  const std::size_t start = n - protocol.oos_len;

  std::vector<double> fc(protocol.oos_len);
  std::vector<char> was_filtered(protocol.oos_len, 0);
  std::vector<std::vector<double>> coefs(protocol.oos_len);

  auto fit_one = [&](std::size_t o) {
    const std::size_t d = start + o;
    Matrix<double> x(protocol.train_len, k);
    std::vector<double> y(protocol.train_len);
    for (std::size_t r = 0; r < protocol.train_len; ++r) {
      const std::size_t target = d - protocol.train_len + r;
      std::copy(feats[target - 1].begin(), feats[target - 1].end(), x.row(r).begin());
      y[r] = records[target].rv;
    }
    auto fit = ols_fit(x, y, protocol.strict);
    double raw = predict(fit.beta, feats[d - 1]);
    fc[o] = insanity_filter(raw, y);
    was_filtered[o] = fc[o] != raw;
    coefs[o] = std::move(fit.beta);
  };

  if (exec == Exec::kSerial) {
    for (std::size_t o = 0; o < protocol.oos_len; ++o) fit_one(o);
  } else {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t o = 0; o < std::ptrdiff_t(protocol.oos_len); ++o) {
      try {
        fit_one(std::size_t(o));
      } catch (...) {
#pragma omp critical(voltext_rolling_err)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  }

  ForecastSeries out;
  out.model_id = to_string(spec.family);
  for (std::size_t o = 0; o < protocol.oos_len; ++o) {
    out.push_back(records[start + o].date, records[start + o].rv, fc[o]);
  }
  if (diag) {
    diag->filtered = std::size_t(std::count(was_filtered.begin(), was_filtered.end(), 1));
    diag->coefficients = std::move(coefs);
  }
  return out;
}

}  // namespace voltext::volatility
