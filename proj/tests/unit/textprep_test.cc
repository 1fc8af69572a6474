#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "voltext/common/error.h"
#include "voltext/textprep/clean.h"
#include "voltext/textprep/corpus.h"
#include "voltext/textprep/daily.h"
#include "voltext/textprep/news.h"
#include "voltext/textprep/phrases.h"
#include "voltext/textprep/tokenize.h"

using namespace voltext;
using namespace voltext::textprep;
namespace fs = std::filesystem;

namespace {

const std::vector<CleanRule>& bundled() {
  static const auto rules = load_rules(default_rules_path());
  return rules;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

RawNewsItem item(std::string id, std::string ts, std::string headline, std::set<std::string> tags = {}) {
  RawNewsItem it;
  it.id = std::move(id);
  it.timestamp = parse_timestamp(ts);
  it.headline = std::move(headline);
  it.tags = std::move(tags);
  return it;
}

}  // namespace

TEST(Clean, DecodesEntitiesAndFoldsCase) {
  EXPECT_EQ(decode_entities("AT&amp;T &lt;b&gt; &quot;x&quot; &#39;y&#39; &#x41;"), "AT&T <b> \"x\" 'y' A");
  EXPECT_EQ(to_lower_ascii("Dow JONES Ünd"), "dow jones Ünd");
}

TEST(Clean, BundledCatalogueLoads) {
  EXPECT_GT(bundled().size(), 40u);
  for (const auto& r : bundled()) EXPECT_FALSE(r.rule_id.empty());
}

TEST(Clean, StripsMarkupAndTrailingBoilerplate) {
  const auto out = clean_text("<p>Apple shares rallied after strong iPhone sales.</p> (END) Dow Jones Newswires",
                              bundled());
  EXPECT_EQ(out.find("<p>"), std::string::npos);
  EXPECT_EQ(out.find("dow jones newswires"), std::string::npos);
  EXPECT_NE(out.find("apple shares rallied"), std::string::npos);
}

TEST(Clean, ShortAndEmptyItemsAreRejected) {
  EXPECT_EQ(code_of([] { clean_text("tiny", bundled()); }), ErrorCode::kTooShort);
  EXPECT_EQ(code_of([] { clean_text("<p></p>   ", bundled()); }), ErrorCode::kEmptyAfterClean);
  // 24 vs 25 characters.
  EXPECT_EQ(code_of([] { clean_text("abcdefghij abcdefghij ab", {}); }), ErrorCode::kTooShort);
  EXPECT_NO_THROW(clean_text("abcdefghij abcdefghij abc", {}));
}

TEST(Clean, LengthCountsCodePoints) {
  EXPECT_EQ(utf8_length("abc"), 3u);
  EXPECT_EQ(utf8_length("\xc3\xa9t\xc3\xa9"), 3u);
  EXPECT_EQ(utf8_length("\xe2\x82\xac"), 1u);
}

TEST(Clean, RuleActions) {
  const auto rules = parse_rules(
      "A\tBeginsWith\tTruncateFrom\t\\(end\\)\n"
      "B\tEndsWith\tTruncateBefore\tdateline:\n"
      "C\tGeneral\tReplace\tu\\.s\\.\tus\n"
      "D\tFinalChecks\tDelete\t\\bzz\\b\n");
  ASSERT_EQ(rules.size(), 4u);
  EXPECT_EQ(apply_rules("Dateline: the U.S. economy zz grew (END) trailer", rules), "the us economy grew");
}

TEST(Clean, MalformedCatalogue) {
  EXPECT_EQ(code_of([] { parse_rules("X\tNowhere\tDelete\tabc\n"); }), ErrorCode::kFormatError);
  EXPECT_EQ(code_of([] { parse_rules("X\tGeneral\tDelete\t(unclosed\n"); }), ErrorCode::kFormatError);
}

TEST(Tokenize, SentencesAndPunctuation) {
  const auto s = tokenize("stocks fell, (sharply). s&p and u.s markets drop! why?");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], (Sentence{"stocks", "fell", "sharply"}));
  EXPECT_EQ(s[1], (Sentence{"s&p", "and", "u.s", "markets", "drop"}));
  EXPECT_EQ(s[2], (Sentence{"why"}));
}

TEST(Tokenize, NumericTokensKeepTheirShape) {
  const auto s = tokenize("revenue of $4.2m, up 3.5% from (2015) and 1,200 units");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], (Sentence{"revenue", "of", "$4.2m", "up", "3.5%", "from", "2015", "and", "1,200", "units"}));
}

TEST(Phrases, ScoreFormula) {
  EXPECT_DOUBLE_EQ(bigram_score(20, 40, 50, 10000, 5), (20.0 - 5.0) * 10000.0 / (40.0 * 50.0));
  EXPECT_LE(bigram_score(3, 40, 50, 10000, 5), 0.0);
}

TEST(Phrases, FrequentPairMerges) {
  SentenceCorpus c;
  for (int i = 0; i < 50; ++i) {
    c.add({"donald", "trump", "said", "word" + std::to_string(i)});
    c.add({"market", "word" + std::to_string(i % 7), "fell"});
  }
  for (int i = 0; i < 200; ++i) c.add({"f" + std::to_string(i), "g" + std::to_string(i), "h", "k", "m"});
  c.recount();
  PhraseOptions opt;
  opt.min_count = 5;
  opt.threshold = 10.0;
  const auto res = detect_bigrams_with_models(c, opt);
  ASSERT_EQ(res.models.size(), 1u);
  EXPECT_TRUE(res.models[0].contains("donald", "trump"));
  EXPECT_FALSE(res.models[0].contains("said", "word1"));
  EXPECT_EQ(res.corpus.sentences[0][0], "donald_trump");
  EXPECT_EQ(res.corpus.token_counts.at("donald_trump"), 50);
}

TEST(Phrases, SecondPassBuildsTrigrams) {
  SentenceCorpus c;
  for (int i = 0; i < 60; ++i) c.add({"new", "york", "times", "x" + std::to_string(i)});
  c.recount();
  PhraseOptions opt;
  opt.min_count = 5;
  opt.threshold = 1.0;
  opt.passes = 2;
  const auto res = detect_bigrams_with_models(c, opt);
  EXPECT_EQ(res.corpus.sentences[0][0], "new_york_times");
}

TEST(Phrases, SaveLoadRoundTrip) {
  PhraseModel m;
  m.add("donald", "trump", 123.5);
  m.add("new", "york", 99.0);
  const auto path = fs::temp_directory_path() / "voltext_phrases_test.tsv";
  save_phrases({m}, path);
  const auto back = load_phrases(path);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_TRUE(back[0].contains("new", "york"));
  Sentence s{"the", "new", "york", "office"};
  EXPECT_EQ(back[0].apply(s), 1u);
  EXPECT_EQ(s, (Sentence{"the", "new_york", "office"}));
  fs::remove(path);
}

TEST(News, ReadSortsAndDeduplicates) {
  const auto path = fs::temp_directory_path() / "voltext_news_test.jsonl";
  {
    std::ofstream out(path);
    out << R"({"id":"b","timestamp":"2016-10-26T14:00:00Z","headline":"Second headline","body":"","tags":["about:aapl"]})" "\n";
    out << R"({"id":"a","timestamp":"2016-10-26T13:00:00Z","headline":"First headline","body":"","tags":["About:AAPL","hot"]})" "\n";
    out << R"({"id":"a","timestamp":"2016-10-26T15:00:00Z","headline":"Same id","body":"","tags":[]})" "\n";
    out << R"({"id":"c","timestamp":"2016-10-26T16:00:00Z","headline":"First headline","body":"","tags":[]})" "\n";
  }
  const auto items = read_corpus(path);
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[0].id, "a");
  EXPECT_TRUE(items[0].has_tag("about:aapl"));
  EXPECT_EQ(items[1].id, "b");
  fs::remove(path);
}

TEST(News, BadLineIsFormatError) {
  const auto path = fs::temp_directory_path() / "voltext_news_bad.jsonl";
  std::ofstream(path) << "{not json}\n";
  EXPECT_EQ(code_of([&] { read_corpus(path); }), ErrorCode::kFormatError);
  fs::remove(path);
  EXPECT_EQ(code_of([&] { read_corpus(path); }), ErrorCode::kIoError);
}

TEST(Daily, TagFilters) {
  const auto it = item("1", "2016-10-26T13:00:00Z", "x", {"about:aapl", "hot"});
  EXPECT_TRUE(matches_tags(it, ""));
  EXPECT_TRUE(matches_tags(it, "about:aapl"));
  EXPECT_TRUE(matches_tags(it, "hot+about:aapl"));
  EXPECT_FALSE(matches_tags(it, "hot+about:msft"));
}

TEST(Daily, WindowIsHalfOpenAtTheCutoff) {
  // 09:30 New York is 13:30 UTC in October.
  std::vector<RawNewsItem> items{
      item("1", "2016-10-26T13:29:59Z", "Apple rallies on strong quarterly results", {"about:aapl"}),
      item("2", "2016-10-26T13:30:00Z", "Apple opens higher after record iphone sales", {"about:aapl"}),
      item("3", "2016-10-27T13:29:00Z", "Microsoft cloud growth beats all estimates", {"about:msft"}),
      item("4", "2016-10-27T13:30:00Z", "Apple closes lower as suppliers warn on demand", {"about:aapl"}),
  };
  const auto toks = aggregate_daily_headlines(items, "about:aapl", parse_date("2016-10-26"), LocalCutoff{}, bundled());
  ASSERT_FALSE(toks.empty());
  EXPECT_EQ(toks.front(), "apple");
  EXPECT_EQ(toks[1], "opens");
  EXPECT_EQ(std::count(toks.begin(), toks.end(), "apple"), 1);
}

TEST(Daily, RejectedHeadlinesYieldNothing) {
  EXPECT_TRUE(headline_tokens("short", bundled()).empty());
  PhraseModel m;
  m.add("record", "iphone", 50.0);
  const auto t = headline_tokens("Apple opens higher after record iPhone sales", bundled(), {m});
  EXPECT_NE(std::find(t.begin(), t.end(), "record_iphone"), t.end());
}

TEST(Corpus, SentencesFromCleanedItems) {
  std::vector<RawNewsItem> items{item("1", "2016-10-26T13:00:00Z", "Stocks rallied today. Bonds fell sharply.")};
  items[0].body = "Investors cheered the news.";
  const auto cleaned = clean_corpus(items, bundled());
  ASSERT_EQ(cleaned.size(), 1u);
  const auto corpus = sentences_from(cleaned);
  EXPECT_GE(corpus.sentences.size(), 2u);
  EXPECT_EQ(corpus.token_counts.at("stocks"), 1);
}
