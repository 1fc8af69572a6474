#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "voltext/common/error.h"
#include "voltext/common/forecast_series.h"
#include "voltext/embedding/evaluate.h"
#include "voltext/embedding/io.h"
#include "voltext/embedding/train.h"
#include "voltext/eval/bootstrap.h"
#include "voltext/eval/losses.h"
#include "voltext/eval/report.h"
#include "voltext/explain/attribution.h"
#include "voltext/explain/report.h"
#include "voltext/nlpml/checkpoint.h"
#include "voltext/nlpml/input.h"
#include "voltext/nlpml/trainer.h"
#include "voltext/pipeline/config.h"
#include "voltext/pipeline/run.h"
#include "voltext/pipeline/samples.h"
#include "voltext/pipeline/synth.h"
#include "voltext/textprep/corpus.h"
#include "voltext/textprep/daily.h"
#include "voltext/textprep/phrases.h"
#include "voltext/volatility/realized.h"
#include "voltext/volatility/rolling.h"

namespace fs = std::filesystem;
using namespace voltext;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  bool seed_set = false;
  bool strict = false;
  int jobs = 0;

  Exec exec() const { return strict ? Exec::kSerial : Exec::kParallel; }
};

std::vector<std::string> split_tokens(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

void print_neighbors(const std::vector<embedding::Neighbor>& ns) {
  for (const auto& n : ns) std::printf("%s\t%.6f\n", n.token.c_str(), n.cosine);
}

std::vector<ForecastSeries> read_all(const std::vector<std::string>& paths) {
  std::vector<ForecastSeries> out;
  for (const auto& p : paths) out.push_back(read_forecast_csv(p));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text-driven volatility forecasting toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { g.seed = s; g.seed_set = true; },
                                         "Master seed");
  app.add_flag("--strict", g.strict, "Serial, bit-reproducible execution");
  app.add_option("--jobs,-j", g.jobs, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  std::function<void()> action;

  // clean
  auto* clean = app.add_subcommand("clean", "Clean a news corpus");
  std::string rules_path, in_path, out_path, sentences_path, phrases_path;
  textprep::PhraseOptions phrase_opts;
  bool no_phrases = false;
  clean->add_option("--rules", rules_path, "Rule catalogue (default: bundled)");
  clean->add_option("--in", in_path, "Input corpus (JSONL)")->required();
  clean->add_option("--out", out_path, "Cleaned corpus (JSONL)")->required();
  clean->add_option("--sentences", sentences_path, "Also write phrase-merged sentences");
  clean->add_option("--phrases", phrases_path, "Also write the phrase model");
  clean->add_option("--threshold", phrase_opts.threshold, "Phrase score threshold");
  clean->add_option("--min-count", phrase_opts.min_count, "Phrase min count");
  clean->add_option("--passes", phrase_opts.passes, "Phrase passes");
  clean->add_flag("--no-phrases", no_phrases, "Skip phrase detection");
  clean->callback([&] {
    action = [&] {
      const auto rules = textprep::load_rules(rules_path.empty() ? textprep::default_rules_path() : fs::path(rules_path));
      const auto raw = textprep::read_corpus(in_path);
      const auto cleaned = textprep::clean_corpus(raw, rules);
      textprep::write_corpus(cleaned, out_path);
      std::printf("kept %zu of %zu items\n", cleaned.size(), raw.size());
      if (sentences_path.empty() && phrases_path.empty()) return;
      auto sentences = textprep::sentences_from(cleaned);
      std::vector<textprep::PhraseModel> models;
      if (!no_phrases) {
        auto r = textprep::detect_bigrams_with_models(sentences, phrase_opts);
        std::printf("%zu phrase merges\n", r.merges);
        sentences = std::move(r.corpus);
        models = std::move(r.models);
      }
      if (!sentences_path.empty()) textprep::write_sentences(sentences, sentences_path);
      if (!phrases_path.empty()) textprep::save_phrases(models, phrases_path);
    };
  });

  // embed
  auto* embed = app.add_subcommand("embed", "Train and evaluate word embeddings");
  embed->require_subcommand(1);
  std::string vectors_path, format = "binary", mode = "skipgram", algo = "word2vec";
  embedding::TrainConfig tc;
  auto* etrain = embed->add_subcommand("train", "Train on a sentence file");
  etrain->add_option("--in", in_path, "Sentences, one per line")->required();
  etrain->add_option("--out", out_path, "Output embedding")->required();
  etrain->add_option("--format", format, "text or binary");
  etrain->add_option("--mode", mode, "skipgram or cbow");
  etrain->add_option("--algo", algo, "word2vec or fasttext");
  etrain->add_option("--dim", tc.dim);
  etrain->add_option("--window", tc.window);
  etrain->add_option("--min-count", tc.min_count);
  etrain->add_option("--negatives", tc.negatives);
  etrain->add_option("--epochs", tc.epochs);
  etrain->add_option("--alpha", tc.alpha0);
  etrain->add_option("--sample", tc.sample);
  etrain->add_option("--threads", tc.threads);
  etrain->callback([&] {
    action = [&] {
      tc.mode = embedding::parse_architecture(mode);
      tc.algo = embedding::parse_algorithm(algo);
      if (g.seed_set) tc.seed = g.seed;
      if (g.strict) tc.threads = 1;
      const auto corpus = textprep::read_sentences(in_path);
      embedding::TrainStats stats;
      const auto model = embedding::train(corpus, tc, &stats);
      embedding::save_embedding(model, out_path, embedding::parse_embedding_format(format));
      std::printf("vocabulary %zu, %lld tokens processed\n", model.vocab().size(),
                  static_cast<long long>(stats.processed_tokens));
    };
  });

  std::string bench_path;
  auto* ean = embed->add_subcommand("eval-analogy", "Analogy benchmark accuracy");
  ean->add_option("--vectors", vectors_path)->required();
  ean->add_option("--benchmark", bench_path)->required();
  ean->callback([&] {
    action = [&] {
      const auto wv = embedding::load_word_vectors(vectors_path);
      const auto rep = embedding::evaluate_analogy_suite(embedding::load_analogy_benchmark(bench_path), wv);
      auto line = [](const embedding::SectionScore& s) {
        auto acc = s.accuracy();
        std::printf("%-30s %6zu/%-6zu skipped %-6zu %s\n", s.name.c_str(), s.correct, s.answered, s.skipped,
                    acc ? std::to_string(*acc).c_str() : "n/a");
      };
      for (const auto& s : rep.sections) line(s);
      line(rep.overall);
    };
  });

  auto* esim = embed->add_subcommand("eval-sim", "Spearman correlation with human similarity scores");
  esim->add_option("--vectors", vectors_path)->required();
  esim->add_option("--pairs", bench_path)->required();
  esim->callback([&] {
    action = [&] {
      const auto wv = embedding::load_word_vectors(vectors_path);
      const auto rep = embedding::evaluate_similarity(embedding::load_similarity_pairs(bench_path), wv);
      std::printf("spearman %.6f used %zu skipped %zu\n", rep.spearman, rep.used, rep.skipped);
    };
  });

  std::string token;
  std::vector<std::string> tokens;
  std::size_t top_n = 10, dims = 2;
  auto* enb = embed->add_subcommand("neighbors", "Nearest tokens by cosine");
  enb->add_option("--vectors", vectors_path)->required();
  enb->add_option("--token", token)->required();
  enb->add_option("--top", top_n);
  enb->callback([&] {
    action = [&] { print_neighbors(embedding::most_similar(embedding::load_word_vectors(vectors_path), token, top_n)); };
  });

  auto* eodd = embed->add_subcommand("odd-one", "Token that fits the others least");
  eodd->add_option("--vectors", vectors_path)->required();
  eodd->add_option("tokens", tokens)->required();
  eodd->callback([&] {
    action = [&] { std::printf("%s\n", embedding::odd_one_out(embedding::load_word_vectors(vectors_path), tokens).c_str()); };
  });

  auto* epca = embed->add_subcommand("pca", "Project tokens onto principal components");
  epca->add_option("--vectors", vectors_path)->required();
  epca->add_option("--dims", dims);
  epca->add_option("--out", out_path, "CSV output (default: stdout)");
  epca->add_option("tokens", tokens)->required();
  epca->callback([&] {
    action = [&] {
      const auto p = embedding::pca_project(embedding::load_word_vectors(vectors_path), tokens, dims);
      std::ofstream file;
      if (!out_path.empty()) file.open(out_path);
      std::ostream& out = out_path.empty() ? std::cout : file;
      out << "token";
      for (std::size_t d = 0; d < dims; ++d) out << ",pc" << d + 1;
      out << '\n';
      for (std::size_t i = 0; i < p.tokens.size(); ++i) {
        out << p.tokens[i];
        for (std::size_t d = 0; d < dims; ++d) out << ',' << p.coords(i, d);
        out << '\n';
      }
    };
  });

  // rv
  auto* rv = app.add_subcommand("rv", "Realized measures and HAR-family forecasts");
  rv->require_subcommand(1);
  int grid = 5;
  std::string records_path, model_name = "HAR";
  volatility::RollingProtocol protocol;
  auto* rvc = rv->add_subcommand("compute", "Daily realized measures from a price file");
  rvc->add_option("--prices", in_path, "timestamp,price CSV")->required();
  rvc->add_option("--out", out_path)->required();
  rvc->add_option("--grid", grid, "Sampling grid in minutes");
  rvc->callback([&] {
    action = [&] {
      const auto ticks = volatility::read_price_csv(in_path);
      const auto recs = volatility::realized_measures(volatility::session_returns(ticks, grid));
      volatility::write_records_csv(recs, out_path);
      std::printf("%zu days\n", recs.size());
    };
  });
  auto* rvf = rv->add_subcommand("forecast", "Rolling out-of-sample forecasts");
  rvf->add_option("--records", records_path)->required();
  rvf->add_option("--model", model_name, "AR1 HAR HARJ CHAR SHAR ARQ HARQ HARQF");
  rvf->add_option("--train-len", protocol.train_len);
  rvf->add_option("--oos-len", protocol.oos_len);
  rvf->add_option("--out", out_path)->required();
  rvf->callback([&] {
    action = [&] {
      volatility::HarSpec spec;
      spec.family = volatility::parse_har_family(model_name);
      protocol.strict = g.strict;
      volatility::RollingDiagnostics diag;
      const auto recs = volatility::read_records_csv(records_path);
      auto s = volatility::rolling_forecast(recs, spec, protocol, g.exec(), &diag);
      write_forecast_csv(s, out_path);
      std::printf("%zu forecasts, %zu filtered\n", s.size(), diag.filtered);
    };
  });

  // nlpml
  auto* nlp = app.add_subcommand("nlpml", "Embedding + CNN volatility model");
  nlp->require_subcommand(1);
  nlpml::CnnConfig cc;
  std::string corpus_path, ticker, tag_template = "about:{ticker}", ckpt_dir;
  auto* ntrain = nlp->add_subcommand("train", "Rolling training and out-of-sample forecasts");
  ntrain->add_option("--corpus", corpus_path, "Raw news corpus")->required();
  ntrain->add_option("--rules", rules_path);
  ntrain->add_option("--phrases", phrases_path);
  ntrain->add_option("--records", records_path, "Realized measures CSV")->required();
  ntrain->add_option("--vectors", vectors_path)->required();
  ntrain->add_option("--ticker", ticker)->required();
  ntrain->add_option("--tag", tag_template);
  ntrain->add_option("--filter-widths", cc.filter_widths)->delimiter(',');
  ntrain->add_option("--filter-sets", cc.filter_sets);
  ntrain->add_option("--dropout", cc.dropout_rate);
  ntrain->add_option("--l2", cc.l2_decay);
  ntrain->add_option("--epochs", cc.epochs);
  ntrain->add_option("--input-days", cc.input_days);
  ntrain->add_option("--max-len", cc.max_len);
  ntrain->add_flag("--trainable-embedding", cc.embedding_trainable);
  ntrain->add_option("--train-len", protocol.train_len);
  ntrain->add_option("--oos-len", protocol.oos_len);
  ntrain->add_option("--checkpoints", ckpt_dir, "Directory for per-event checkpoints");
  ntrain->add_option("--out", out_path)->required();
  ntrain->callback([&] {
    action = [&] {
      if (g.seed_set) cc.seed = g.seed;
      pipeline::NewsConfig news;
      news.tag_template = tag_template;
      const auto rules = textprep::load_rules(rules_path.empty() ? textprep::default_rules_path() : fs::path(rules_path));
      const auto phrases = phrases_path.empty() ? std::vector<textprep::PhraseModel>{} : textprep::load_phrases(phrases_path);
      const auto items = textprep::read_corpus(corpus_path);
      const auto recs = volatility::read_records_csv(records_path);
      std::vector<Date> days;
      for (const auto& r : recs) days.push_back(r.date);
      const auto windows = pipeline::news_windows(items, news.tag_for(ticker), days, news.cutoff, rules, phrases);
      const auto wv = embedding::load_word_vectors(vectors_path);
      const auto samples = pipeline::build_samples(recs, windows, wv, cc);
      if (!ckpt_dir.empty()) fs::create_directories(ckpt_dir);
      nlpml::RollingTrainReport rep;
      auto s = nlpml::train_rolling(samples, cc, protocol, &wv, g.exec(), &rep,
                                    [&](std::size_t e, std::size_t, std::size_t, const nlpml::TrainedModel& m) {
                                      if (ckpt_dir.empty()) return;
                                      char name[32];
                                      std::snprintf(name, sizeof name, "event_%03zu.vtxc", e);
                                      nlpml::save_checkpoint(m, fs::path(ckpt_dir) / name);
                                    });
      s.ticker = ticker;
      write_forecast_csv(s, out_path);
      std::printf("%zu forecasts, %zu training events, %zu filtered\n", s.size(), rep.training_events, rep.filtered);
    };
  });

  // eval
  auto* ev = app.add_subcommand("eval", "Forecast losses and comparisons");
  ev->require_subcommand(1);
  std::string loss_name = "MSE", panel_name = "all", forecast_path, other_path;
  std::vector<std::string> model_paths, bench_paths;
  eval::RealityCheckOptions rco;
  std::string recentering = "consistent";
  auto* escore = ev->add_subcommand("score", "Loss of one forecast series");
  escore->add_option("--forecast", forecast_path)->required();
  escore->add_option("--loss", loss_name);
  escore->add_option("--panel", panel_name, "all, normal or jump");
  auto parse_panel = [](const std::string& s) {
    if (s == "all") return eval::Panel::kAll;
    if (s == "normal") return eval::Panel::kNormal;
    if (s == "jump") return eval::Panel::kJump;
    fail(ErrorCode::kInvalidArgument, "unknown panel '" + s + "'");
  };
  escore->callback([&] {
    action = [&] {
      const auto s = read_forecast_csv(forecast_path);
      const auto days = eval::panel_days(s, parse_panel(panel_name));
      std::printf("%.10g\n", eval::score(s, eval::parse_loss(loss_name), days));
    };
  });
  auto* esplit = ev->add_subcommand("split", "Normal/jump day classification");
  esplit->add_option("--forecast", forecast_path)->required();
  esplit->callback([&] {
    action = [&] {
      const auto s = read_forecast_csv(forecast_path);
      const auto split = eval::classify_days(s.actual);
      std::printf("normal %zu jump %zu q1 %.6g q3 %.6g threshold %.6g\n", split.normal_idx.size(),
                  split.jump_idx.size(), split.q1, split.q3, split.threshold);
      for (auto i : split.jump_idx) std::printf("%s\n", format_date(s.dates[i]).c_str());
    };
  });
  auto* edelta = ev->add_subcommand("delta", "Avg/Med loss differences across tickers");
  edelta->add_option("--models", model_paths, "One forecast per ticker")->required();
  edelta->add_option("--benchmarks", bench_paths, "Matching benchmark forecasts")->required();
  edelta->add_option("--loss", loss_name);
  edelta->add_option("--panel", panel_name);
  edelta->callback([&] {
    action = [&] {
      const auto m = read_all(model_paths);
      const auto b = read_all(bench_paths);
      if (m.size() != b.size()) fail(ErrorCode::kShapeMismatch, "one benchmark per model is required");
      const auto d = eval::delta_aggregate(m, b, eval::parse_loss(loss_name), parse_panel(panel_name));
      std::printf("avg %.10g med %.10g tickers %zu\n", d.avg, d.med, d.per_ticker.size());
    };
  });
  auto* erc = ev->add_subcommand("rc", "Reality check of a candidate against benchmarks");
  erc->add_option("--candidate", forecast_path)->required();
  erc->add_option("--benchmarks", bench_paths)->required();
  erc->add_option("--loss", loss_name);
  erc->add_option("--panel", panel_name);
  erc->add_option("--n-boot", rco.n_boot);
  erc->add_option("--block", rco.avg_block, "Mean block length");
  erc->add_option("--recentering", recentering, "consistent or all");
  erc->callback([&] {
    action = [&] {
      rco.loss = eval::parse_loss(loss_name);
      if (g.seed_set) rco.seed = g.seed;
      rco.recentering = recentering == "all" ? eval::Recentering::kAll : eval::Recentering::kConsistent;
      const auto c = read_forecast_csv(forecast_path);
      const auto b = read_all(bench_paths);
      const auto days = eval::panel_days(c, parse_panel(panel_name));
      const auto r = eval::reality_check(c, b, rco, days, g.exec());
      std::printf("statistic %.10g p %.6f bootstrap %zu block %.3g\n", r.statistic, r.p_value, r.n_bootstrap,
                  r.avg_block);
    };
  });
  auto* eens = ev->add_subcommand("ensemble", "Average of two forecast series");
  eens->add_option("--a", forecast_path)->required();
  eens->add_option("--b", other_path)->required();
  eens->add_option("--out", out_path)->required();
  eens->callback([&] {
    action = [&] {
      write_forecast_csv(eval::ensemble_mean(read_forecast_csv(forecast_path), read_forecast_csv(other_path)), out_path);
    };
  });

  // explain
  auto* ex = app.add_subcommand("explain", "Token attributions for one input");
  ex->require_subcommand(1);
  std::string ckpt_path, text, report_format = "csv", quad_name = "gauss-legendre", date_label;
  int steps = 50;
  std::size_t permutations = 0;
  auto add_input = [&](CLI::App* c) {
    c->add_option("--checkpoint", ckpt_path)->required();
    c->add_option("--vectors", vectors_path)->required();
    c->add_option("--text", text, "Space-separated tokens of the day")->required();
    c->add_option("--format", report_format, "csv or html");
    c->add_option("--date", date_label);
    c->add_option("--ticker", ticker);
    c->add_option("--out", out_path)->required();
  };
  auto day_input = [&](nlpml::TrainedModel& m, nlpml::DayInput& in) {
    m = nlpml::load_checkpoint(ckpt_path);
    const auto wv = embedding::load_word_vectors(vectors_path);
    in = nlpml::build_day_input(split_tokens(text), wv, std::size_t(m.model.config().max_len));
  };
  auto* eig = ex->add_subcommand("ig", "Integrated gradients");
  add_input(eig);
  eig->add_option("--method", quad_name, "gauss-legendre or riemann");
  eig->add_option("--steps", steps);
  eig->callback([&] {
    action = [&] {
      nlpml::TrainedModel m;
      nlpml::DayInput in;
      day_input(m, in);
      explain::QuadratureSpec q;
      q.method = explain::parse_quadrature(quad_name);
      q.steps = steps;
      const auto a = explain::integrated_gradients(explain::cnn_model_fn(m.model, in.max_len),
                                                   explain::model_rows(m, in), in.max_len, q, g.exec());
      explain::token_report(a, explain::slot_tokens(in), out_path, explain::parse_report_format(report_format), {date_label, ticker});
      std::printf("F(x) %.10g F(0) %.10g sum %.10g\n", a.input_value, a.baseline_value, a.sum());
    };
  });
  auto* eshap = ex->add_subcommand("shap", "Shapley values (exact up to 12 tokens, else sampled)");
  add_input(eshap);
  eshap->add_option("--permutations", permutations, "Force permutation sampling with N permutations");
  eshap->callback([&] {
    action = [&] {
      nlpml::TrainedModel m;
      nlpml::DayInput in;
      day_input(m, in);
      const auto f = explain::cnn_model_fn(m.model, in.max_len);
      const auto x = explain::model_rows(m, in);
      const bool exact = permutations == 0 && in.length() <= explain::kMaxExactShapleyTokens;
      const auto a = exact ? explain::shapley_exact(f, x, in.max_len, g.exec())
                           : explain::shapley_sampled(f, x, in.max_len, permutations ? permutations : 1000,
                                                      g.seed, g.exec());
      explain::token_report(a, explain::slot_tokens(in), out_path, explain::parse_report_format(report_format), {date_label, ticker});
      std::printf("%s F(x) %.10g F(empty) %.10g sum %.10g\n", explain::to_string(a.method).c_str(), a.input_value,
                  a.baseline_value, a.sum());
    };
  });

  // synth
  auto* syn = app.add_subcommand("synth", "Generate synthetic news and prices with planted signals");
  pipeline::SynthSpec ss;
  syn->add_option("--out", out_path, "Output directory")->required();
  syn->add_option("--tickers", ss.tickers)->delimiter(',');
  syn->add_option("--days", ss.n_days);
  syn->add_option("--start", ss.start_date);
  syn->add_option("--intraday", ss.intraday_m, "Returns per session");
  syn->add_option("--jump-prob", ss.jump_prob);
  syn->add_option("--jump-size", ss.jump_size, "Jump return in percent");
  syn->add_option("--headlines", ss.headlines_per_day, "Mean headlines per day");
  syn->add_option("--marker", ss.marker);
  syn->add_option("--p-signal", ss.p_signal);
  syn->add_option("--p-false", ss.p_false);
  syn->callback([&] {
    action = [&] {
      if (g.seed_set) ss.seed = g.seed;
      const auto data = pipeline::generate_synthetic(ss);
      pipeline::write_synthetic(data, out_path);
      const auto cfg = pipeline::synthetic_config(ss);
      std::ofstream(fs::path(out_path) / "config.yaml") << pipeline::to_yaml(cfg);
      std::size_t jumps = 0;
      for (const auto& l : data.labels) jumps += l.jump;
      std::printf("%zu days, %zu news items, %zu jump days\n", data.days.size(), data.news.size(), jumps);
    };
  });

  // run
  auto* runc = app.add_subcommand("run", "Run the full pipeline from a config file");
  std::string config_path, run_dir;
  bool resume = false;
  runc->add_option("--config", config_path)->required();
  runc->add_option("--run-dir", run_dir, "Use this run directory");
  runc->add_flag("--resume", resume, "Reuse the newest run directory");
  runc->callback([&] {
    action = [&] {
      auto cfg = pipeline::load_config(config_path);
      if (g.seed_set) cfg.seed = g.seed;
      if (g.strict) cfg.strict = true;
      cfg.protocol.strict = cfg.strict;
      pipeline::RunOptions opt;
      opt.run_dir = run_dir;
      opt.resume = resume;
      opt.exec = cfg.strict ? Exec::kSerial : Exec::kParallel;
      opt.log = [](const std::string& m) { std::fprintf(stderr, "%s\n", m.c_str()); };
      const auto r = pipeline::run_pipeline(cfg, opt);
      std::printf("%s\n", r.run_dir.string().c_str());
    };
  });

  // report
  auto* rep = app.add_subcommand("report", "Summary tables for a run directory");
  rep->add_option("--run-dir", run_dir)->required();
  rep->callback([&] {
    action = [&] {
      const auto cfg = pipeline::load_run_config(run_dir);
      for (const auto& p : pipeline::emit_report(run_dir, cfg)) std::printf("%s\n", p.string().c_str());
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    if (g.jobs > 0) omp_set_num_threads(g.jobs);
    if (action) action();
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
}
