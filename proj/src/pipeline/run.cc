#include "voltext/pipeline/run.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "voltext/common/error.h"
#include "voltext/common/forecast_series.h"
#include "voltext/embedding/io.h"
#include "voltext/embedding/train.h"
#include "voltext/eval/losses.h"
#include "voltext/eval/report.h"
#include "voltext/explain/attribution.h"
#include "voltext/explain/report.h"
#include "voltext/nlpml/checkpoint.h"
#include "voltext/nlpml/trainer.h"
#include "voltext/pipeline/hash.h"
#include "voltext/pipeline/samples.h"
#include "voltext/textprep/corpus.h"
#include "voltext/textprep/daily.h"
#include "voltext/volatility/realized.h"
#include "voltext/volatility/rolling.h"

namespace voltext::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

bool RunResult::ran(const std::string& stage) const {
  for (const auto& s : stages) {
    if (s.name == stage) return s.ran;
  }
  return false;
}

namespace {

constexpr char kManifest[] = "manifest.json";
constexpr char kConfigCopy[] = "config.yaml";

std::string checkpoint_name(std::size_t event) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "event_%03zu.vtxc", event);
  return buf;
}

fs::path next_run_dir(const fs::path& outputs, bool resume) {
  int last = 0;
  if (fs::exists(outputs)) {
    for (const auto& e : fs::directory_iterator(outputs)) {
      const auto name = e.path().filename().string();
      if (e.is_directory() && name.rfind("run-", 0) == 0) {
        try {
          last = std::max(last, std::stoi(name.substr(4)));
        } catch (const std::exception&) {
        }
      }
    }
  }
  const int n = resume && last > 0 ? last : last + 1;
  char buf[16];
  std::snprintf(buf, sizeof buf, "run-%03d", n);
  return outputs / buf;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
}

// Stage bookkeeping over manifest.json.
class Runner {
 public:
  Runner(fs::path dir, const PipelineConfig& cfg, const RunOptions& opt)
      : dir_(std::move(dir)), opt_(opt) {
    const auto path = dir_ / kManifest;
    if (fs::exists(path)) {
      std::ifstream in(path);
      try {
        manifest_ = json::parse(in);
      } catch (const json::exception&) {
        manifest_ = json::object();
      }
    }
    manifest_["version"] = kVersion;
    manifest_["seed"] = cfg.seed;
    manifest_["strict"] = cfg.strict;
    manifest_["base_dir"] = fs::absolute(cfg.base_dir).lexically_normal().string();
    if (!manifest_.contains("stages")) manifest_["stages"] = json::object();
  }

  const fs::path& dir() const { return dir_; }

  // `body` returns the produced files relative to the run directory.
  void stage(const std::string& name, const std::vector<std::string>& deps,
             const std::string& key_material, const std::vector<fs::path>& inputs,
             const std::function<std::vector<fs::path>()>& body) {
    std::string material = name + "\n" + key_material + "\n";
    json input_hashes = json::object();
    for (const auto& p : inputs) {
      const auto h = sha256_file(p);
      material += p.lexically_normal().string() + " " + h + "\n";
      input_hashes[p.lexically_normal().string()] = h;
    }
    const std::string key = sha256_hex(material);
    const bool upstream_ran = std::any_of(deps.begin(), deps.end(), [&](const std::string& d) {
      return ran_.count(d) > 0;
    });
    if (!upstream_ran && up_to_date(name, key)) {
      say("skip  " + name);
      outcomes_.push_back({name, false});
      return;
    }
    say("run   " + name);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<fs::path> outputs;
    try {
      outputs = body();
    } catch (const Error& e) {
      fail(e.code(), "stage " + name + ": " + e.message());
    } catch (const std::exception& e) {
      throw std::runtime_error("stage " + name + ": " + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json out = json::object();
    for (const auto& rel : outputs) out[rel.generic_string()] = sha256_file(dir_ / rel);
    manifest_["stages"][name] = {{"key", key},       {"inputs", input_hashes}, {"outputs", out},
                                 {"seconds", secs},  {"depends_on", deps}};
    ran_.insert(name);
    outcomes_.push_back({name, true});
    save();
  }

  void save() const { write_text(dir_ / kManifest, manifest_.dump(2) + "\n"); }
  std::vector<StageOutcome> outcomes() const { return outcomes_; }

 private:
  bool up_to_date(const std::string& name, const std::string& key) const {
    const auto& stages = manifest_["stages"];
    if (!stages.contains(name)) return false;
    const auto& s = stages[name];
    if (s.value("key", "") != key) return false;
    for (const auto& [rel, hash] : s["outputs"].items()) {
      const auto p = dir_ / rel;
      if (!fs::exists(p) || sha256_file(p) != hash.get<std::string>()) return false;
    }
    return true;
  }

  void say(const std::string& m) const {
    if (opt_.log) opt_.log(m);
  }

  fs::path dir_;
  const RunOptions& opt_;
  json manifest_ = json::object();
  std::set<std::string> ran_;
  std::vector<StageOutcome> outcomes_;
};

// Configuration slices that feed each stage key.
std::string slice(const PipelineConfig& c, const std::string& section) {
  const std::string text = to_yaml(c);
  std::istringstream in(text);
  std::string line, out;
  bool on = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != ' ' && line[0] != '-') on = line.rfind(section + ":", 0) == 0;
    if (on) out += line + "\n";
  }
  return out;
}

struct NlpInputs {
  std::vector<volatility::DailyVolRecord> records;
  std::vector<std::vector<std::string>> windows;
};

NlpInputs nlp_inputs(const PipelineConfig& cfg, const fs::path& run, const std::string& ticker,
                     const std::vector<textprep::RawNewsItem>& items,
                     const std::vector<textprep::CleanRule>& rules,
                     const std::vector<textprep::PhraseModel>& phrases) {
  NlpInputs in;
  in.records = volatility::read_records_csv(run / "rv" / (ticker + ".csv"));
  std::vector<Date> days;
  for (const auto& r : in.records) days.push_back(r.date);
  in.windows = news_windows(items, cfg.news.tag_for(ticker), days, cfg.news.cutoff, rules, phrases);
  return in;
}

std::string safe_name(const std::string& token) {
  std::string s;
  for (char c : token) s += std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ? c : '_';
  return s;
}

}  // namespace

PipelineConfig load_run_config(const fs::path& run_dir) {
  std::ifstream in(run_dir / kConfigCopy);
  if (!in) fail(ErrorCode::kConfigError, "no " + std::string(kConfigCopy) + " in " + run_dir.string());
  std::stringstream ss;
  ss << in.rdbuf();
  fs::path base = run_dir;
  std::ifstream m(run_dir / kManifest);
  if (m) {
    try {
      base = json::parse(m).value("base_dir", run_dir.string());
    } catch (const json::exception&) {
    }
  }
  return parse_config(ss.str(), base, (run_dir / kConfigCopy).string());
}

RunResult run_pipeline(const PipelineConfig& cfg, const RunOptions& opt) {
  cfg.validate(true);
  const fs::path run = opt.run_dir.empty() ? next_run_dir(cfg.resolve(cfg.paths.outputs), opt.resume)
                                           : opt.run_dir;
  fs::create_directories(run);
  write_text(run / kConfigCopy, to_yaml(cfg));
  Runner R(run, cfg, opt);
  const Exec exec = opt.exec;
  const auto corpus_path = cfg.resolve(cfg.paths.corpus);
  const auto rules_path = cfg.rules_path();

  R.stage("clean", {}, slice(cfg, "phrases"), {corpus_path, rules_path}, [&] {
    const auto rules = textprep::load_rules(rules_path);
    const auto cleaned = textprep::clean_corpus(textprep::read_corpus(corpus_path), rules);
    fs::create_directories(run / "clean");
    textprep::write_corpus(cleaned, run / "clean" / "news.jsonl");
    auto sentences = textprep::sentences_from(cleaned);
    std::vector<textprep::PhraseModel> models;
    if (cfg.phrases.enabled) {
      auto merged = textprep::detect_bigrams_with_models(sentences, cfg.phrases.options);
      sentences = std::move(merged.corpus);
      models = std::move(merged.models);
    }
    textprep::write_sentences(sentences, run / "clean" / "sentences.txt");
    textprep::save_phrases(models, run / "clean" / "phrases.tsv");
    return std::vector<fs::path>{"clean/news.jsonl", "clean/sentences.txt", "clean/phrases.tsv"};
  });

  const fs::path vectors_rel = "embed/vectors.bin";
  {
    std::vector<fs::path> inputs;
    std::string material = "strict " + std::to_string(cfg.strict) + "\n";
    if (cfg.paths.embeddings.empty()) {
      inputs.push_back(run / "clean" / "sentences.txt");
      material += slice(cfg, "embedding");
    } else {
      inputs.push_back(cfg.resolve(cfg.paths.embeddings));
    }
    R.stage("embed", {"clean"}, material, inputs, [&] {
      fs::create_directories(run / "embed");
      if (!cfg.paths.embeddings.empty()) {
        fs::copy_file(cfg.resolve(cfg.paths.embeddings), run / vectors_rel,
                      fs::copy_options::overwrite_existing);
      } else {
        auto ec = cfg.embedding;
        if (cfg.strict) ec.threads = 1;
        const auto corpus = textprep::read_sentences(run / "clean" / "sentences.txt");
        const auto model = embedding::train(corpus, ec);
        embedding::save_embedding_binary(model, (run / vectors_rel).string());
      }
      return std::vector<fs::path>{vectors_rel};
    });
  }

  {
    std::vector<fs::path> inputs;
    for (const auto& t : cfg.tickers) inputs.push_back(cfg.price_path(t));
    R.stage("rv", {}, "grid " + std::to_string(cfg.news.grid_minutes), inputs, [&] {
      std::vector<fs::path> outs;
      for (const auto& t : cfg.tickers) {
        const auto ticks = volatility::read_price_csv(cfg.price_path(t));
        const auto days = volatility::session_returns(ticks, cfg.news.grid_minutes);
        const auto records = volatility::realized_measures(days);
        fs::create_directories(run / "rv");
        volatility::write_records_csv(records, run / "rv" / (t + ".csv"));
        outs.push_back(fs::path("rv") / (t + ".csv"));
      }
      return outs;
    });
  }

  std::vector<fs::path> rv_files;
  for (const auto& t : cfg.tickers) rv_files.push_back(run / "rv" / (t + ".csv"));

  R.stage("har", {"rv"}, slice(cfg, "protocol") + slice(cfg, "har_models") + "strict " + std::to_string(cfg.strict),
          rv_files, [&] {
    std::vector<fs::path> outs;
    for (const auto& t : cfg.tickers) {
      const auto records = volatility::read_records_csv(run / "rv" / (t + ".csv"));
      fs::create_directories(run / "forecasts" / t);
      for (auto family : cfg.har_models) {
        volatility::HarSpec spec;
        spec.family = family;
        auto series = volatility::rolling_forecast(records, spec, cfg.protocol, exec);
        series.ticker = t;
        const auto rel = fs::path("forecasts") / t / (volatility::to_string(family) + ".csv");
        write_forecast_csv(series, run / rel);
        outs.push_back(rel);
      }
    }
    return outs;
  });

  std::vector<fs::path> nlp_inputs_files = rv_files;
  nlp_inputs_files.push_back(corpus_path);
  nlp_inputs_files.push_back(rules_path);
  nlp_inputs_files.push_back(run / "clean" / "phrases.tsv");
  nlp_inputs_files.push_back(run / vectors_rel);
  const std::string nlp_material = slice(cfg, "cnn") + slice(cfg, "protocol") + slice(cfg, "news") +
                                   slice(cfg, "tickers");

  if (!cfg.cnn.empty()) {
    R.stage("nlpml", {"clean", "embed", "rv"}, nlp_material, nlp_inputs_files, [&] {
      const auto items = textprep::read_corpus(corpus_path);
      const auto rules = textprep::load_rules(rules_path);
      const auto phrases = textprep::load_phrases(run / "clean" / "phrases.tsv");
      const auto wv = embedding::load_word_vectors((run / vectors_rel).string());
      std::vector<fs::path> outs;
      for (const auto& t : cfg.tickers) {
        const auto in = nlp_inputs(cfg, run, t, items, rules, phrases);
        fs::create_directories(run / "forecasts" / t);
        for (const auto& c : cfg.cnn) {
          const auto samples = build_samples(in.records, in.windows, wv, c.config);
          const auto ckdir = fs::path("checkpoints") / t / c.name;
          fs::create_directories(run / ckdir);
          auto series = nlpml::train_rolling(
              samples, c.config, cfg.protocol, &wv, exec, nullptr,
              [&](std::size_t event, std::size_t, std::size_t, const nlpml::TrainedModel& m) {
                const auto rel = ckdir / checkpoint_name(event);
                nlpml::save_checkpoint(m, run / rel);
                outs.push_back(rel);
              });
          series.ticker = t;
          series.model_id = c.name;
          const auto rel = fs::path("forecasts") / t / (c.name + ".csv");
          write_forecast_csv(series, run / rel);
          outs.push_back(rel);
        }
      }
      return outs;
    });
  }

  if (cfg.explain.enabled && !cfg.cnn.empty()) {
    std::vector<fs::path> inputs = nlp_inputs_files;
    for (const auto& t : cfg.tickers) {
      for (const auto& c : cfg.cnn) {
        const auto dir = run / "checkpoints" / t / c.name;
        const std::size_t events = (cfg.protocol.oos_len + std::size_t(c.config.retrain_every) - 1) /
                                   std::size_t(c.config.retrain_every);
        for (std::size_t e = 0; e < events; ++e) inputs.push_back(dir / checkpoint_name(e));
      }
    }
    R.stage("explain", {"nlpml"}, nlp_material + slice(cfg, "explain"), inputs, [&] {
      const auto items = textprep::read_corpus(corpus_path);
      const auto rules = textprep::load_rules(rules_path);
      const auto phrases = textprep::load_phrases(run / "clean" / "phrases.tsv");
      const auto wv = embedding::load_word_vectors((run / vectors_rel).string());
      std::vector<fs::path> outs;
      for (const auto& t : cfg.tickers) {
        const auto in = nlp_inputs(cfg, run, t, items, rules, phrases);
        for (const auto& c : cfg.cnn) {
          const auto samples = build_samples(in.records, in.windows, wv, c.config);
          const auto every = std::size_t(c.config.retrain_every);
          const std::size_t oos = cfg.protocol.oos_len;
          const std::size_t first = samples.size() - oos;
          std::vector<nlpml::TrainedModel> models;
          for (std::size_t e = 0; e * every < oos; ++e) {
            models.push_back(nlpml::load_checkpoint(run / "checkpoints" / t / c.name / checkpoint_name(e)));
          }
          std::vector<explain::TrackedDay> days;
          for (std::size_t j = 0; j < oos; ++j) {
            const auto& s = samples[first + j];
            days.push_back({s.date, &models[j / every], &s.input, s.target});
          }
          const auto rel_dir = fs::path("explain") / t / c.name;
          fs::create_directories(run / rel_dir);

          for (const auto& token : cfg.explain.tokens) {
            const auto track = explain::track_token(days, token, cfg.explain.quadrature, exec);
            const auto rel = rel_dir / ("track_" + safe_name(token) + ".csv");
            std::ofstream out(run / rel);
            out << "date,slot,attribution,actual_rv\n";
            char buf[160];
            for (const auto& o : track.occurrences) {
              std::snprintf(buf, sizeof buf, "%s,%zu,%.17g,%.17g\n", format_date(o.date).c_str(), o.slot,
                            o.attribution, o.actual);
              out << buf;
            }
            outs.push_back(rel);
          }

          const auto ig_rel = rel_dir / "ig_days.csv";
          std::ofstream ig(run / ig_rel);
          const std::size_t n_days = std::min(cfg.explain.max_days, days.size());
          for (std::size_t j = 0; j < n_days; ++j) {
            const auto& d = days[j];
            const auto x = explain::model_rows(*d.model, *d.input);
            const auto fn = explain::cnn_model_fn(d.model->model, d.input->max_len);
            const auto a = explain::integrated_gradients(fn, x, d.input->max_len, cfg.explain.quadrature, exec);
            const explain::ReportContext ctx{format_date(d.date), t};
            explain::write_token_csv(a, explain::slot_tokens(*d.input), ctx, ig, j == 0);
            const auto html = rel_dir / ("ig_" + format_date(d.date) + ".html");
            explain::token_report(a, explain::slot_tokens(*d.input), run / html, explain::ReportFormat::kHTML, ctx);
            outs.push_back(html);
          }
          ig.close();
          outs.push_back(ig_rel);
        }
      }
      return outs;
    });
  }

  {
    std::vector<fs::path> inputs;
    for (const auto& t : cfg.tickers) {
      for (auto f : cfg.har_models) inputs.push_back(run / "forecasts" / t / (volatility::to_string(f) + ".csv"));
      for (const auto& c : cfg.cnn) inputs.push_back(run / "forecasts" / t / (c.name + ".csv"));
    }
    R.stage("report", {"har", "nlpml"}, slice(cfg, "evaluation") + slice(cfg, "seed"), inputs, [&] {
      std::vector<fs::path> outs;
      for (const auto& p : emit_report(run, cfg)) outs.push_back(p.lexically_relative(run));
      return outs;
    });
  }

  R.save();
  return {run, R.outcomes()};
}

std::vector<fs::path> emit_report(const fs::path& run, const PipelineConfig& cfg) {
  const auto dir = run / "report";
  fs::create_directories(dir);
  std::vector<fs::path> written;
  const auto& har = cfg.har_models;
  std::size_t reference = 0;
  for (std::size_t k = 0; k < har.size(); ++k) {
    if (volatility::to_string(har[k]) == cfg.evaluation.reference) reference = k;
  }

  std::map<std::string, std::vector<eval::TickerForecasts>> per_model;
  std::vector<std::string> candidates;
  for (const auto& c : cfg.cnn) candidates.push_back(c.name);
  for (const auto& t : cfg.tickers) {
    std::vector<ForecastSeries> bench;
    for (auto f : har) {
      bench.push_back(read_forecast_csv(run / "forecasts" / t / (volatility::to_string(f) + ".csv"), t));
    }
    for (const auto& name : candidates) {
      eval::TickerForecasts tf;
      tf.ticker = t;
      tf.candidate = read_forecast_csv(run / "forecasts" / t / (name + ".csv"), t);
      tf.candidate.model_id = name;
      tf.benchmarks = bench;
      tf.reference = reference;
      per_model[name].push_back(std::move(tf));
    }
  }

  std::vector<eval::PanelRow> rows;
  for (const auto& name : candidates) {
    auto r = eval::panel_table(per_model[name], cfg.evaluation.losses, cfg.evaluation.panels, cfg.evaluation.rc);
    for (auto& row : r) row.model = name;
    rows.insert(rows.end(), r.begin(), r.end());
  }
  {
    std::ofstream csv(dir / "panel.csv");
    eval::write_panel_csv(rows, csv);
    std::ofstream txt(dir / "panel.txt");
    eval::write_panel_text(rows, txt);
    written.push_back(dir / "panel.csv");
    written.push_back(dir / "panel.txt");
  }

  // Wide layout: one column per configured CNN.
  {
    std::ofstream g(dir / "grid.csv");
    g << "loss,panel,stat";
    for (const auto& name : candidates) g << ',' << name;
    g << '\n';
    char buf[64];
    for (auto loss : cfg.evaluation.losses) {
      for (auto panel : cfg.evaluation.panels) {
        for (const char* stat : {"avg", "med", "rc05", "rc10"}) {
          g << eval::to_string(loss) << ',' << eval::to_string(panel) << ',' << stat;
          for (const auto& name : candidates) {
            double v = 0.0;
            for (const auto& r : rows) {
              if (r.model != name || r.loss != loss || r.panel != panel) continue;
              const std::string s = stat;
              v = s == "avg" ? r.avg : s == "med" ? r.med : s == "rc05" ? r.rc05 : r.rc10;
            }
            std::snprintf(buf, sizeof buf, ",%.10g", v);
            g << buf;
          }
          g << '\n';
        }
      }
    }
    written.push_back(dir / "grid.csv");
  }

  // Bar-chart series: per-ticker deltas against the reference benchmark.
  {
    std::ofstream d(dir / "deltas.csv");
    d << "ticker,model,loss,panel,delta\n";
    char buf[64];
    for (const auto& name : candidates) {
      const auto& tfs = per_model[name];
      for (auto loss : cfg.evaluation.losses) {
        for (auto panel : cfg.evaluation.panels) {
          for (const auto& tf : tfs) {
            const auto days = eval::panel_days(tf.candidate, panel);
            if (days.empty() || (loss == eval::Loss::kMDA && tf.candidate.size() < 2)) continue;
            const double delta = eval::score(tf.candidate, loss, days, cfg.evaluation.rc.mda_reference) -
                                 eval::score(tf.benchmarks[tf.reference], loss, days, cfg.evaluation.rc.mda_reference);
            std::snprintf(buf, sizeof buf, "%.17g", delta);
            d << tf.ticker << ',' << name << ',' << eval::to_string(loss) << ',' << eval::to_string(panel)
              << ',' << buf << '\n';
          }
        }
      }
    }
    written.push_back(dir / "deltas.csv");
  }

  // Line-chart series: daily forecasts of every model next to the actual.
  for (const auto& t : cfg.tickers) {
    const auto path = dir / ("series_" + t + ".csv");
    std::ofstream s(path);
    std::vector<ForecastSeries> all;
    for (auto f : har) all.push_back(read_forecast_csv(run / "forecasts" / t / (volatility::to_string(f) + ".csv"), t));
    for (const auto& name : candidates) all.push_back(read_forecast_csv(run / "forecasts" / t / (name + ".csv"), t));
    if (all.empty()) continue;
    s << "date,actual";
    for (const auto& m : all) s << ',' << m.model_id;
    s << '\n';
    char buf[64];
    for (std::size_t i = 0; i < all[0].size(); ++i) {
      s << format_date(all[0].dates[i]);
      std::snprintf(buf, sizeof buf, ",%.17g", all[0].actual[i]);
      s << buf;
      for (const auto& m : all) {
        std::snprintf(buf, sizeof buf, ",%.17g", i < m.size() ? m.forecast[i] : 0.0);
        s << buf;
      }
      s << '\n';
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace voltext::pipeline
