#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "voltext/common/time.h"

namespace voltext::textprep {

struct RawNewsItem {
  std::string id;
  Timestamp timestamp;
  std::string headline;
  std::string body;
  std::set<std::string> tags;  // lowercase, e.g. "about:aapl", "hot"

  bool has_tag(const std::string& tag) const { return tags.count(tag) > 0; }
};

// Line-delimited JSON, one record per line:
//   {"id":..,"timestamp":"2016-10-26T13:45:00Z","headline":..,"body":..,"tags":[..]}
// Items are returned sorted by timestamp (stable for ties). Duplicate ids and
// exact duplicate (headline, body) pairs are dropped.
std::vector<RawNewsItem> read_corpus(const std::filesystem::path& path);
void write_corpus(const std::vector<RawNewsItem>& items,
                  const std::filesystem::path& path);

}  // namespace voltext::textprep
