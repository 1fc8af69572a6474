#include "voltext/textprep/clean.h"

#include <array>
#include <fstream>
#include <sstream>

#include "voltext/common/csv.h"
#include "voltext/common/error.h"

namespace voltext::textprep {

namespace {

constexpr std::array kCategoryOrder = {
    RuleCategory::kPrimary, RuleCategory::kBeginsWith, RuleCategory::kEndsWith,
    RuleCategory::kGeneral, RuleCategory::kFinalChecks};

constexpr int kMaxPasses = 8;

RuleCategory parse_category(std::string_view s, const std::string& where) {
  if (s == "Primary") return RuleCategory::kPrimary;
  if (s == "BeginsWith") return RuleCategory::kBeginsWith;
  if (s == "EndsWith") return RuleCategory::kEndsWith;
  if (s == "General") return RuleCategory::kGeneral;
  if (s == "FinalChecks") return RuleCategory::kFinalChecks;
  fail(ErrorCode::kFormatError, where + ": unknown category '" + std::string(s) + "'");
}

RuleAction parse_action(std::string_view s, const std::string& where) {
  if (s == "Delete") return RuleAction::kDelete;
  if (s == "TruncateFrom") return RuleAction::kTruncateFrom;
  if (s == "TruncateBefore") return RuleAction::kTruncateBefore;
  if (s == "Replace") return RuleAction::kReplace;
  fail(ErrorCode::kFormatError, where + ": unknown action '" + std::string(s) + "'");
}

std::string apply_one(const std::string& text, const CleanRule& rule) {
  switch (rule.action) {
    case RuleAction::kDelete:
    case RuleAction::kReplace:
      return boost::regex_replace(text, rule.compiled, rule.replacement,
                                  boost::regex_constants::format_literal);
    case RuleAction::kTruncateFrom: {
      boost::smatch m;
      if (!boost::regex_search(text, m, rule.compiled)) return text;
      return text.substr(0, std::size_t(m[0].first - text.begin()));
    }
    case RuleAction::kTruncateBefore: {
      boost::smatch m;
      if (!boost::regex_search(text, m, rule.compiled)) return text;
      return text.substr(std::size_t(m[0].first - text.begin() + m[0].length()));
    }
  }
  return text;
}

std::string normalize_space(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : s) {
    bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (ws) {
      pending = !out.empty();
    } else {
      if (pending) out.push_back(' ');
      pending = false;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

CleanRule CleanRule::make(std::string id, RuleCategory category, RuleAction action,
                          std::string pattern, std::string replacement) {
  CleanRule r;
  r.rule_id = std::move(id);
  r.category = category;
  r.action = action;
  r.pattern = std::move(pattern);
  r.replacement = std::move(replacement);
  try {
    r.compiled = boost::regex(r.pattern, boost::regex::perl);
  } catch (const boost::regex_error& e) {
    fail(ErrorCode::kFormatError, "rule " + r.rule_id + ": bad pattern: " + e.what());
  }
  return r;
}

std::vector<CleanRule> parse_rules(std::string_view text, std::string_view origin) {
  std::vector<CleanRule> rules;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    auto raw = text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
    start = nl == std::string_view::npos ? text.size() : nl + 1;
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (trim(raw).empty() || trim(raw).front() == '#') continue;
    std::string where = std::string(origin) + ":" + std::to_string(lineno);
    std::vector<std::string> cols;
    std::size_t p = 0;
    while (true) {
      auto tab = raw.find('\t', p);
      cols.emplace_back(raw.substr(p, tab == std::string_view::npos ? raw.size() - p : tab - p));
      if (tab == std::string_view::npos) break;
      p = tab + 1;
    }
    if (cols.size() < 4) fail(ErrorCode::kFormatError, where + ": expected 4 tab-separated columns");
    auto category = parse_category(trim(cols[1]), where);
    auto action = parse_action(trim(cols[2]), where);
    std::string replacement = cols.size() > 4 ? cols[4] : " ";
    rules.push_back(CleanRule::make(std::string(trim(cols[0])), category, action,
                                    cols[3], replacement));
  }
  return rules;
}

std::vector<CleanRule> load_rules(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot read rules " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_rules(ss.str(), path.string());
}

std::filesystem::path default_rules_path() {
  return std::filesystem::path(VOLTEXT_DATA_DIR) / "clean_rules.tsv";
}

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '&') {
      out.push_back(text[i]);
      continue;
    }
    auto semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    auto name = text.substr(i + 1, semi - i - 1);
    std::string rep;
    if (name == "amp") rep = "&";
    else if (name == "lt") rep = "<";
    else if (name == "gt") rep = ">";
    else if (name == "quot") rep = "\"";
    else if (name == "apos") rep = "'";
    else if (name == "nbsp") rep = " ";
    else if (name.size() > 1 && name[0] == '#') {
      unsigned long cp = 0;
      try {
        cp = name[1] == 'x' || name[1] == 'X'
                 ? std::stoul(std::string(name.substr(2)), nullptr, 16)
                 : std::stoul(std::string(name.substr(1)), nullptr, 10);
      } catch (...) {
        cp = 0;
      }
      if (cp > 0 && cp < 0x80) {
        rep = std::string(1, char(cp));
      } else if (cp >= 0x80 && cp < 0x800) {
        rep = {char(0xC0 | (cp >> 6)), char(0x80 | (cp & 0x3F))};
      } else if (cp >= 0x800 && cp < 0x10000) {
        rep = {char(0xE0 | (cp >> 12)), char(0x80 | ((cp >> 6) & 0x3F)),
               char(0x80 | (cp & 0x3F))};
      }
    }
    if (rep.empty()) {
      out.push_back('&');
      continue;
    }
    out += rep;
    i = semi;
  }
  return out;
}

std::string to_lower_ascii(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = char(c - 'A' + 'a');
  }
  return out;
}

std::string apply_rules(std::string_view raw, const std::vector<CleanRule>& rules) {
  std::string text(raw);
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    std::string next = to_lower_ascii(decode_entities(text));
    for (auto category : kCategoryOrder) {
      for (const auto& rule : rules) {
        if (rule.category == category) next = apply_one(next, rule);
      }
    }
    // The first pass sees the original line structure; later passes see the
    // flattened text, so the result is a fixed point of what a re-run sees.
    next = normalize_space(next);
    if (next == text) break;
    text = std::move(next);
  }
  return text;
}

std::string clean_text(std::string_view raw, const std::vector<CleanRule>& rules) {
  std::string out = apply_rules(raw, rules);
  if (out.empty()) fail(ErrorCode::kEmptyAfterClean, "nothing left after cleaning");
  if (utf8_length(out) < kMinCleanLength) {
    fail(ErrorCode::kTooShort, "cleaned text has " + std::to_string(utf8_length(out)) +
                                   " characters: '" + out + "'");
  }
  return out;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace voltext::textprep
