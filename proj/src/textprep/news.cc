#include "voltext/textprep/news.h"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "voltext/common/error.h"

namespace voltext::textprep {

namespace {

std::string lower(std::string s) {
  for (auto& c : s) {
    if (c >= 'A' && c <= 'Z') c = char(c - 'A' + 'a');
  }
  return s;
}

}  // namespace

std::vector<RawNewsItem> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot read corpus " + path.string());
  std::vector<RawNewsItem> items;
  std::unordered_set<std::string> ids;
  std::unordered_set<std::string> contents;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kFormatError,
           path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    RawNewsItem item;
    try {
      item.id = j.at("id").get<std::string>();
      item.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
      item.headline = j.value("headline", "");
      item.body = j.value("body", "");
      for (const auto& t : j.value("tags", nlohmann::json::array())) {
        item.tags.insert(lower(t.get<std::string>()));
      }
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kFormatError,
           path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (item.headline.empty() && item.body.empty()) continue;
    if (!ids.insert(item.id).second) continue;
    if (!contents.insert(item.headline + '\x1f' + item.body).second) continue;
    items.push_back(std::move(item));
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const RawNewsItem& a, const RawNewsItem& b) {
                     return a.timestamp < b.timestamp;
                   });
  return items;
}

void write_corpus(const std::vector<RawNewsItem>& items,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write corpus " + path.string());
  for (const auto& item : items) {
    nlohmann::json j;
    j["id"] = item.id;
    j["timestamp"] = format_timestamp(item.timestamp);
    j["headline"] = item.headline;
    j["body"] = item.body;
    j["tags"] = item.tags;
    out << j.dump() << '\n';
  }
}

}  // namespace voltext::textprep
