#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <boost/regex.hpp>

namespace voltext::textprep {

enum class RuleCategory { kPrimary, kBeginsWith, kEndsWith, kGeneral, kFinalChecks };
enum class RuleAction { kDelete, kTruncateFrom, kTruncateBefore, kReplace };

struct CleanRule {
  std::string rule_id;
  RuleCategory category = RuleCategory::kGeneral;
  RuleAction action = RuleAction::kDelete;
  std::string pattern;
  std::string replacement = " ";
  boost::regex compiled;

  static CleanRule make(std::string id, RuleCategory category, RuleAction action,
                        std::string pattern, std::string replacement = " ");
};

inline constexpr std::size_t kMinCleanLength = 25;

// Parses the tab-separated rule catalogue (see data/clean_rules.tsv).
std::vector<CleanRule> parse_rules(std::string_view text, std::string_view origin = "<rules>");
std::vector<CleanRule> load_rules(const std::filesystem::path& path);
// The catalogue shipped in data/.
std::filesystem::path default_rules_path();

// XML entity decoding and ASCII case folding; the built-in half of the
// Primary stage. Non-ASCII bytes pass through untouched.
std::string decode_entities(std::string_view text);
std::string to_lower_ascii(std::string_view text);

// Runs all rules (categories in fixed order, declared order within a
// category) and normalizes whitespace, repeating until the text no longer
// changes. No length checks.
std::string apply_rules(std::string_view raw, const std::vector<CleanRule>& rules);

// apply_rules plus the short-item checks. Throws EmptyAfterClean when nothing
// remains and TooShort when fewer than 25 characters remain.
std::string clean_text(std::string_view raw, const std::vector<CleanRule>& rules);

std::size_t utf8_length(std::string_view s);

}  // namespace voltext::textprep
