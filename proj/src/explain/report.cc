#include "voltext/explain/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "voltext/common/error.h"

namespace voltext::explain {

ReportFormat parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::kCSV;
  if (s == "html") return ReportFormat::kHTML;
  fail(ErrorCode::kInvalidArgument, "unknown report format '" + s + "'");
}

namespace {

std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out.push_back(c);
  }
  return out + "\"";
}

void check_tokens(const AttributionVector& a, const std::vector<std::string>& tokens) {
  if (tokens.size() < a.tokens) fail(ErrorCode::kShapeMismatch, "fewer token strings than attributed slots");
}

}  // namespace

void write_token_csv(const AttributionVector& a, const std::vector<std::string>& tokens,
                     const ReportContext& ctx, std::ostream& out, bool header) {
  check_tokens(a, tokens);
  if (header) out << "date,ticker,token,slot,value,method\n";
  char buf[64];
  for (std::size_t i = 0; i < a.tokens; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", a.values[i]);
    out << ctx.date << ',' << csv_field(ctx.ticker) << ',' << csv_field(tokens[i]) << ',' << i
        << ',' << buf << ',' << to_string(a.method) << '\n';
  }
}

void write_token_html(const AttributionVector& a, const std::vector<std::string>& tokens,
                      const ReportContext& ctx, std::ostream& out) {
  check_tokens(a, tokens);
  double mx = 0.0;
  for (std::size_t i = 0; i < a.tokens; ++i) mx = std::max(mx, std::abs(a.values[i]));
  out << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>"
      << html_escape(to_string(a.method) + " " + ctx.ticker + " " + ctx.date) << "</title></head>\n"
      << "<body style=\"font-family:monospace;line-height:1.8\">\n"
      << "<p>" << html_escape(to_string(a.method)) << " &middot; " << html_escape(ctx.ticker) << ' '
      << html_escape(ctx.date) << " &middot; forecast " << a.input_value << ", baseline "
      << a.baseline_value << "</p>\n<p>\n";
  char style[96];
  for (std::size_t i = 0; i < a.tokens; ++i) {
    const double v = a.values[i];
    out << "<span title=\"" << v << "\"";
    if (v != 0.0 && mx > 0.0) {
      const double alpha = std::abs(v) / mx;
      std::snprintf(style, sizeof style, " style=\"background-color:rgba(%s,%.4f)\"",
                    v > 0 ? "255,0,0" : "0,0,255", alpha);
      out << style;
    }
    out << ">" << html_escape(tokens[i]) << "</span>\n";
  }
  out << "</p>\n</body></html>\n";
}

void token_report(const AttributionVector& a, const std::vector<std::string>& tokens,
                  const std::filesystem::path& path, ReportFormat format, const ReportContext& ctx) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  if (format == ReportFormat::kCSV) {
    write_token_csv(a, tokens, ctx, out);
  } else {
    write_token_html(a, tokens, ctx, out);
  }
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path.string());
}

std::vector<std::string> slot_tokens(const nlpml::DayInput& input) {
  if (input.no_news) return {nlpml::kPadToken};
  return input.tokens;
}

Matrix<double> model_rows(const nlpml::TrainedModel& model, const nlpml::DayInput& input) {
  return nlpml::materialize(input, model.model, model.table ? &*model.table : nullptr);
}

TokenTrack track_token(const std::vector<TrackedDay>& days, const std::string& token,
                       const QuadratureSpec& quad, Exec exec) {
  TokenTrack out;
  for (const auto& day : days) {
    if (!day.model || !day.input) fail(ErrorCode::kInvalidArgument, "tracked day without model or input");
    if (day.input->no_news) continue;
    const auto& toks = day.input->tokens;
    if (std::find(toks.begin(), toks.end(), token) == toks.end()) continue;
    auto fn = cnn_model_fn(day.model->model, day.input->max_len);
    auto ig = integrated_gradients(fn, model_rows(*day.model, *day.input), day.input->max_len, quad, exec);
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (toks[i] != token) continue;
      const double v = ig.values[i];
      out.occurrences.push_back({day.date, i, v, day.actual});
      if (v > 0) ++out.increases;
      else if (v < 0) ++out.decreases;
      else ++out.zeros;
    }
  }
  return out;
}

}  // namespace voltext::explain
