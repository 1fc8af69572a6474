#include "voltext/pipeline/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <span>

#include "voltext/common/error.h"
#include "voltext/common/rng.h"
#include "voltext/textprep/clean.h"

namespace voltext::pipeline {

void SynthSpec::validate() const {
  auto bad = [](const std::string& m) { fail(ErrorCode::kConfigError, "synthetic: " + m); };
  if (tickers.empty()) bad("at least one ticker is required");
  if (n_days < 2) bad("n_days must be at least 2");
  if (intraday_m <= 1 || 390 % intraday_m != 0) bad("intraday_m must divide 390");
  if (!(jump_prob >= 0 && jump_prob <= 1)) bad("jump_prob must be in [0,1]");
  if (!(p_signal >= 0 && p_signal <= 1) || !(p_false >= 0 && p_false <= 1)) {
    bad("p_signal and p_false must be in [0,1]");
  }
  if (!(headlines_per_day >= 0)) bad("headlines_per_day must be >= 0");
  if (words_per_headline < 5) bad("words_per_headline must be >= 5");
  if (n_topics < 1) bad("n_topics must be >= 1");
  if (vocab_size < 2 * n_topics) bad("vocab_size must give each topic at least two words");
  if (alert_words < 1) bad("alert_words must be >= 1");
  if (marker.empty()) bad("marker must be set");
  if (!(std::abs(log_vol_phi) < 1)) bad("log_vol_phi must be in (-1,1)");
  if (!(log_vol_eta >= 0) || !(jump_size >= 0)) bad("log_vol_eta and jump_size must be >= 0");
  parse_date(start_date);
}

std::vector<std::string> synthetic_vocabulary(int n) {
  static const char* kOnset[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
  static const char* kVowel[] = {"a", "e", "i", "o", "u"};
  std::vector<std::string> words;
  std::set<std::string> seen;
  Rng rng(0x5eed5eedULL);
  while (int(words.size()) < n) {
    std::string w;
    int syllables = 2 + int(uniform_index(rng, 2));
    for (int s = 0; s < syllables; ++s) {
      w += kOnset[uniform_index(rng, std::size(kOnset))];
      w += kVowel[uniform_index(rng, std::size(kVowel))];
    }
    if (seen.insert(w).second) words.push_back(w);
  }
  return words;
}

namespace {

std::string make_headline(Rng& rng, std::span<const std::string> words, int n,
                          const std::string& lead) {
  std::string h = lead;
  for (int i = 0; i < n; ++i) {
    if (!h.empty()) h += ' ';
    h += words[uniform_index(rng, words.size())];
  }
  return h;
}

}  // namespace

SynthData generate_synthetic(const SynthSpec& spec) {
  using namespace std::chrono;
  spec.validate();
  SynthData data;
  Date d = parse_date(spec.start_date);
  if (!is_weekday(d)) d = next_weekday(d);
  for (std::size_t i = 0; i < spec.n_days; ++i) {
    data.days.push_back(d);
    d = next_weekday(d);
  }
  const auto vocab = synthetic_vocabulary(spec.vocab_size + spec.alert_words);
  const std::span<const std::string> alert(vocab.data() + spec.vocab_size, std::size_t(spec.alert_words));
  std::vector<std::span<const std::string>> topics;
  for (int t = 0; t < spec.n_topics; ++t) {
    const std::size_t lo = std::size_t(spec.vocab_size) * std::size_t(t) / std::size_t(spec.n_topics);
    const std::size_t hi = std::size_t(spec.vocab_size) * std::size_t(t + 1) / std::size_t(spec.n_topics);
    topics.emplace_back(vocab.data() + lo, hi - lo);
  }
  const int step_minutes = 390 / spec.intraday_m;
  const LocalCutoff cutoff;
  std::size_t next_id = 0;

  for (std::size_t k = 0; k < spec.tickers.size(); ++k) {
    const std::string& ticker = spec.tickers[k];
    const std::string tag = "about:" + textprep::to_lower_ascii(ticker);
    Rng rng = stream_rng(spec.seed, k);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::poisson_distribution<int> headline_count(spec.headlines_per_day);
    std::vector<volatility::PriceTick> ticks;
    ticks.reserve(data.days.size() * std::size_t(spec.intraday_m + 1));
    double price = 100.0;
    double h = spec.log_vol_mean;
    for (std::size_t i = 0; i < data.days.size(); ++i) {
      const Date day = data.days[i];
      h = spec.log_vol_mean + spec.log_vol_phi * (h - spec.log_vol_mean) + spec.log_vol_eta * normal(rng);
      data.log_vol.push_back(h);
      const double sigma = std::exp(h) / std::sqrt(double(spec.intraday_m));
      const bool jump = uniform01(rng) < spec.jump_prob;
      const int jump_at = int(uniform_index(rng, std::uint64_t(spec.intraday_m)));
      const double jump_sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;

      ticks.push_back({eastern_to_utc(day, minutes(9 * 60 + 30)), price});
      for (int s = 0; s < spec.intraday_m; ++s) {
        double r = sigma * normal(rng);
        if (jump && s == jump_at) r += jump_sign * spec.jump_size;
        price *= std::exp(r / 100.0);
        ticks.push_back({eastern_to_utc(day, minutes(9 * 60 + 30 + (s + 1) * step_minutes)), price});
      }

      // The news window ends at this day's open.
      const Timestamp start = i == 0 ? cutoff.on(day - days(1)) : cutoff.on(data.days[i - 1]);
      const Timestamp end = cutoff.on(day);
      const auto span = std::uint64_t((end - start).count());
      auto stamp = [&] { return start + seconds(std::int64_t(uniform_index(rng, span))); };
      auto add = [&](std::string headline) {
        textprep::RawNewsItem item;
        item.id = "n" + std::to_string(next_id++);
        item.timestamp = stamp();
        item.headline = std::move(headline);
        item.tags = {tag};
        data.news.push_back(std::move(item));
      };
      const int n = headline_count(rng);
      for (int j = 0; j < n; ++j) {
        const auto& topic = topics[uniform_index(rng, topics.size())];
        add(make_headline(rng, topic, spec.words_per_headline, ""));
      }
      const bool plant = uniform01(rng) < (jump ? spec.p_signal : spec.p_false);
      if (plant) add(make_headline(rng, alert, spec.words_per_headline - 1, spec.marker));
      data.labels.push_back({ticker, day, jump, plant});
    }
    data.prices.emplace_back(ticker, std::move(ticks));
  }
  std::stable_sort(data.news.begin(), data.news.end(),
                   [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  return data;
}

void write_synthetic(const SynthData& data, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "prices");
  textprep::write_corpus(data.news, dir / "news.jsonl");
  for (const auto& [ticker, ticks] : data.prices) {
    const auto path = dir / "prices" / (ticker + ".csv");
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) fail(ErrorCode::kIoError, "cannot write " + path.string());
    std::fputs("timestamp,price\n", f);
    for (const auto& t : ticks) {
      std::fprintf(f, "%s,%.10f\n", format_timestamp(t.time).c_str(), t.price);
    }
    std::fclose(f);
  }
  std::ofstream labels(dir / "labels.csv");
  if (!labels) fail(ErrorCode::kIoError, "cannot write " + (dir / "labels.csv").string());
  labels << "date,ticker,jump,marker_planted\n";
  for (const auto& l : data.labels) {
    labels << format_date(l.date) << ',' << l.ticker << ',' << int(l.jump) << ',' << int(l.marker) << '\n';
  }
}

PipelineConfig synthetic_config(const SynthSpec& spec) {
  PipelineConfig cfg;
  cfg.seed = spec.seed;
  cfg.tickers = spec.tickers;
  cfg.news.grid_minutes = 390 / spec.intraday_m;
  cfg.explain.tokens = {spec.marker};
  cfg.embedding.dim = 16;
  cfg.embedding.min_count = 2;
  cfg.embedding.epochs = 50;
  const std::size_t usable = spec.n_days > 40 ? spec.n_days - 21 : spec.n_days;
  cfg.protocol.oos_len = std::max<std::size_t>(1, usable / 10);
  cfg.protocol.train_len = usable > cfg.protocol.oos_len ? usable - cfg.protocol.oos_len : 1;
  return cfg;
}

}  // namespace voltext::pipeline
