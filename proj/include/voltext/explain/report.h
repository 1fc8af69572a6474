#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "voltext/common/time.h"
#include "voltext/explain/attribution.h"

namespace voltext::explain {

enum class ReportFormat { kCSV, kHTML };
ReportFormat parse_report_format(const std::string& s);

struct ReportContext {
  std::string date;
  std::string ticker;
};

// CSV `date,ticker,token,slot,value,method`, one row per real token.
void write_token_csv(const AttributionVector& a, const std::vector<std::string>& tokens,
                     const ReportContext& ctx, std::ostream& out, bool header = true);
// Static page: positive tokens red, negative blue, opacity |a| / max |a|;
// tokens with zero attribution are left uncolored.
void write_token_html(const AttributionVector& a, const std::vector<std::string>& tokens,
                      const ReportContext& ctx, std::ostream& out);
// Throws IoError.
void token_report(const AttributionVector& a, const std::vector<std::string>& tokens,
                  const std::filesystem::path& path, ReportFormat format,
                  const ReportContext& ctx = {});

// One OOS day: the model in force and that day's input.
struct TrackedDay {
  Date date;
  const nlpml::TrainedModel* model = nullptr;
  const nlpml::DayInput* input = nullptr;
  double actual = 0.0;
};

struct TokenOccurrence {
  Date date;
  std::size_t slot = 0;
  double attribution = 0.0;
  double actual = 0.0;
};

struct TokenTrack {
  std::vector<TokenOccurrence> occurrences;
  std::size_t increases = 0;
  std::size_t decreases = 0;
  std::size_t zeros = 0;
};

// IG attribution of every occurrence of `token` (phrases such as
// "donald_trump" are single tokens), each occurrence reported separately.
TokenTrack track_token(const std::vector<TrackedDay>& days, const std::string& token,
                       const QuadratureSpec& quad = {}, Exec exec = Exec::kParallel);

// Labels for the rows of model_rows: the day's tokens, or the padding token
// for the no-news row.
std::vector<std::string> slot_tokens(const nlpml::DayInput& input);

// Rows the network sees for a day (fine-tuned table rows when present).
Matrix<double> model_rows(const nlpml::TrainedModel& model, const nlpml::DayInput& input);

}  // namespace voltext::explain
