#include "voltext/pipeline/config.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "voltext/common/error.h"
#include "voltext/textprep/clean.h"

namespace voltext::pipeline {

namespace fs = std::filesystem;

std::string NewsConfig::tag_for(const std::string& ticker) const {
  std::string tag = tag_template;
  const std::string key = "{ticker}";
  for (auto pos = tag.find(key); pos != std::string::npos; pos = tag.find(key, pos)) {
    const std::string lower = textprep::to_lower_ascii(ticker);
    tag.replace(pos, key.size(), lower);
    pos += lower.size();
  }
  return tag;
}

fs::path PipelineConfig::resolve(const std::string& p) const {
  fs::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

fs::path PipelineConfig::rules_path() const {
  return paths.rules.empty() ? textprep::default_rules_path() : resolve(paths.rules);
}

fs::path PipelineConfig::price_path(const std::string& ticker) const {
  return resolve(paths.prices) / (ticker + ".csv");
}

void PipelineConfig::validate(bool check_paths) const {
  auto bad = [](const std::string& m) { fail(ErrorCode::kConfigError, m); };
  if (tickers.empty()) bad("tickers: at least one ticker is required");
  std::set<std::string> seen;
  for (const auto& t : tickers) {
    if (t.empty()) bad("tickers: empty ticker");
    if (!seen.insert(t).second) bad("tickers: duplicate " + t);
  }
  if (news.tag_template.empty()) bad("news.tag: empty tag template");
  if (news.grid_minutes <= 0 || 390 % news.grid_minutes != 0) bad("news.grid_minutes must divide 390");
  if (protocol.train_len < 2 || protocol.oos_len < 1) bad("protocol: train_len >= 2 and oos_len >= 1");
  if (har_models.empty() && cnn.empty()) bad("no models configured");
  std::set<std::string> names;
  for (const auto& c : cnn) {
    if (c.name.empty()) bad("cnn: every entry needs a name");
    if (!names.insert(c.name).second) bad("cnn: duplicate name " + c.name);
    try {
      c.config.validate();
    } catch (const Error& e) {
      fail(e.code(), "cnn." + c.name + ": " + e.message());
    }
  }
  if (!cnn.empty() && har_models.empty()) bad("har_models: benchmarks are required for evaluation");
  if (std::find_if(har_models.begin(), har_models.end(), [&](auto f) {
        return volatility::to_string(f) == evaluation.reference;
      }) == har_models.end()) {
    bad("evaluation.reference: " + evaluation.reference + " is not among har_models");
  }
  if (evaluation.rc.n_boot < 1 || !(evaluation.rc.avg_block >= 1)) {
    bad("evaluation: n_boot >= 1 and avg_block >= 1");
  }
  if (explain.quadrature.steps < 1 || explain.quadrature.batch < 1) bad("explain: steps and batch >= 1");
  try {
    if (paths.embeddings.empty()) embedding.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kConfigError, "embedding: " + e.message());
  }
  if (!check_paths) return;
  auto need = [&](const fs::path& p, const std::string& what) {
    if (!fs::exists(p)) bad(what + ": " + p.string() + " does not exist");
  };
  need(resolve(paths.corpus), "paths.corpus");
  need(rules_path(), "paths.rules");
  for (const auto& t : tickers) need(price_path(t), "paths.prices");
  if (!paths.embeddings.empty()) need(resolve(paths.embeddings), "paths.embeddings");
}

namespace {

std::string where(const std::string& origin, const YAML::Node& n) {
  const auto m = n.Mark();
  if (m.is_null()) return origin;
  return origin + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
}

// Map reader that rejects unknown keys.
class Section {
 public:
  Section(const YAML::Node& node, std::string path, const std::string& origin)
      : node_(node), path_(std::move(path)), origin_(origin) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      fail(ErrorCode::kConfigError, where(origin_, node_) + ": " + path_ + " must be a mapping");
    }
  }

  YAML::Node get(const std::string& key) {
    known_.insert(key);
    if (!node_ || node_.IsNull()) return YAML::Node(YAML::NodeType::Undefined);
    return node_[key];
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    YAML::Node n = get(key);
    if (!n) return;
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      fail(ErrorCode::kConfigError, where(origin_, n) + ": bad value for " + name(key));
    }
  }

  template <typename T, typename Parse>
  void read_with(const std::string& key, T& out, Parse parse) {
    YAML::Node n = get(key);
    if (!n) return;
    try {
      out = parse(n.as<std::string>());
    } catch (const Error& e) {
      fail(ErrorCode::kConfigError, where(origin_, n) + ": " + name(key) + ": " + e.message());
    } catch (const std::exception& e) {
      fail(ErrorCode::kConfigError, where(origin_, n) + ": " + name(key) + ": " + e.what());
    }
  }

  template <typename T, typename Parse>
  void read_list(const std::string& key, std::vector<T>& out, Parse parse) {
    YAML::Node n = get(key);
    if (!n) return;
    if (!n.IsSequence()) fail(ErrorCode::kConfigError, where(origin_, n) + ": " + name(key) + " must be a list");
    out.clear();
    for (const auto& item : n) {
      try {
        out.push_back(parse(item.as<std::string>()));
      } catch (const std::exception& e) {
        fail(ErrorCode::kConfigError, where(origin_, item) + ": " + name(key) + ": " + e.what());
      }
    }
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!known_.count(key)) {
        fail(ErrorCode::kConfigError, where(origin_, kv.first) + ": unknown key " + name(key));
      }
    }
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& origin() const { return origin_; }

 private:
  YAML::Node node_;
  std::string path_;
  const std::string& origin_;
  std::set<std::string> known_;
};

std::string to_string(eval::Recentering r) {
  return r == eval::Recentering::kAll ? "all" : "consistent";
}

eval::Recentering parse_recentering(const std::string& s) {
  if (s == "consistent") return eval::Recentering::kConsistent;
  if (s == "all") return eval::Recentering::kAll;
  fail(ErrorCode::kConfigError, "expected consistent or all, got " + s);
}

std::string to_string(eval::MdaReference r) {
  return r == eval::MdaReference::kPreviousForecast ? "previous_forecast" : "previous_actual";
}

eval::MdaReference parse_mda_reference(const std::string& s) {
  if (s == "previous_actual") return eval::MdaReference::kPreviousActual;
  if (s == "previous_forecast") return eval::MdaReference::kPreviousForecast;
  fail(ErrorCode::kConfigError, "expected previous_actual or previous_forecast, got " + s);
}

eval::Panel parse_panel(const std::string& s) {
  const auto l = textprep::to_lower_ascii(s);
  if (l == "all") return eval::Panel::kAll;
  if (l == "normal") return eval::Panel::kNormal;
  if (l == "jump") return eval::Panel::kJump;
  fail(ErrorCode::kConfigError, "expected all, normal or jump, got " + s);
}

std::string to_string(explain::QuadratureMethod m) {
  return m == explain::QuadratureMethod::kRiemann ? "riemann" : "gauss-legendre";
}

std::string format_cutoff(const LocalCutoff& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d:%02d", int(c.time_of_day.count() / 60), int(c.time_of_day.count() % 60));
  return std::string(buf) + " " + c.zone;
}

void read_cnn(const YAML::Node& node, const std::string& path, const std::string& origin,
              NamedCnn& out) {
  Section s(node, path, origin);
  auto& c = out.config;
  s.read("name", out.name);
  s.read("filter_widths", c.filter_widths);
  s.read("filter_sets", c.filter_sets);
  s.read("dropout", c.dropout_rate);
  s.read("l2", c.l2_decay);
  s.read("seed", c.seed);
  s.read("retrain_every", c.retrain_every);
  s.read("trainable_embedding", c.embedding_trainable);
  s.read("input_days", c.input_days);
  s.read("max_len", c.max_len);
  s.read("epochs", c.epochs);
  s.read("batch_size", c.batch_size);
  s.read("early_stop_tol", c.early_stop_tol);
  s.read("early_stop_patience", c.early_stop_patience);
  Section adam(s.get("adam"), s.name("adam"), origin);
  adam.read("lr", c.adam.lr);
  adam.read("beta1", c.adam.beta1);
  adam.read("beta2", c.adam.beta2);
  adam.read("eps", c.adam.eps);
  adam.finish();
  s.finish();
}

}  // namespace

PipelineConfig parse_config(const std::string& yaml_text, const fs::path& base_dir,
                            const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    fail(ErrorCode::kConfigError, origin + ":" + std::to_string(e.mark.line + 1) + ":" +
                                      std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  PipelineConfig cfg;
  cfg.base_dir = base_dir;
  Section top(root, "", origin);
  top.read("seed", cfg.seed);
  top.read("strict", cfg.strict);
  top.read("tickers", cfg.tickers);

  Section paths(top.get("paths"), "paths", origin);
  paths.read("corpus", cfg.paths.corpus);
  paths.read("prices", cfg.paths.prices);
  paths.read("rules", cfg.paths.rules);
  paths.read("embeddings", cfg.paths.embeddings);
  paths.read("outputs", cfg.paths.outputs);
  paths.finish();

  Section news(top.get("news"), "news", origin);
  news.read_with("cutoff", cfg.news.cutoff, [](const std::string& s) { return LocalCutoff::parse(s); });
  news.read("tag", cfg.news.tag_template);
  news.read("grid_minutes", cfg.news.grid_minutes);
  news.finish();

  Section ph(top.get("phrases"), "phrases", origin);
  auto& po = cfg.phrases.options;
  ph.read("enabled", cfg.phrases.enabled);
  ph.read("min_count", po.min_count);
  ph.read("threshold", po.threshold);
  ph.read("max_vocab", po.max_vocab);
  ph.read("passes", po.passes);
  ph.read("delimiter", po.delimiter);
  ph.finish();

  Section em(top.get("embedding"), "embedding", origin);
  auto& ec = cfg.embedding;
  em.read_with("mode", ec.mode, embedding::parse_architecture);
  em.read_with("algo", ec.algo, embedding::parse_algorithm);
  em.read("window", ec.window);
  em.read("min_count", ec.min_count);
  em.read("max_vocab", ec.max_vocab);
  em.read("negatives", ec.negatives);
  em.read("epochs", ec.epochs);
  em.read("alpha0", ec.alpha0);
  em.read("alpha_min", ec.alpha_min);
  em.read("ns_exponent", ec.ns_exponent);
  em.read("dim", ec.dim);
  em.read("ngram_min", ec.ngram_min);
  em.read("ngram_max", ec.ngram_max);
  em.read("buckets", ec.buckets);
  em.read("sample", ec.sample);
  em.read("seed", ec.seed);
  em.read("threads", ec.threads);
  em.finish();

  Section pr(top.get("protocol"), "protocol", origin);
  pr.read("train_len", cfg.protocol.train_len);
  pr.read("oos_len", cfg.protocol.oos_len);
  pr.finish();
  top.read_list("har_models", cfg.har_models, volatility::parse_har_family);

  if (YAML::Node list = top.get("cnn")) {
    if (!list.IsSequence()) fail(ErrorCode::kConfigError, where(origin, list) + ": cnn must be a list");
    cfg.cnn.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      NamedCnn c;
      read_cnn(list[i], "cnn[" + std::to_string(i) + "]", origin, c);
      cfg.cnn.push_back(std::move(c));
    }
  }

  Section ev(top.get("evaluation"), "evaluation", origin);
  ev.read_list("losses", cfg.evaluation.losses, eval::parse_loss);
  ev.read_list("panels", cfg.evaluation.panels, parse_panel);
  ev.read("reference", cfg.evaluation.reference);
  ev.read("n_boot", cfg.evaluation.rc.n_boot);
  ev.read("avg_block", cfg.evaluation.rc.avg_block);
  ev.read_with("recentering", cfg.evaluation.rc.recentering, parse_recentering);
  ev.read_with("mda_reference", cfg.evaluation.rc.mda_reference, parse_mda_reference);
  ev.finish();

  Section ex(top.get("explain"), "explain", origin);
  ex.read("enabled", cfg.explain.enabled);
  ex.read("tokens", cfg.explain.tokens);
  ex.read_with("method", cfg.explain.quadrature.method, explain::parse_quadrature);
  ex.read("steps", cfg.explain.quadrature.steps);
  ex.read("batch", cfg.explain.quadrature.batch);
  ex.read("max_days", cfg.explain.max_days);
  ex.finish();
  top.finish();

  cfg.protocol.strict = cfg.strict;
  cfg.evaluation.rc.seed = cfg.seed;
  cfg.validate(false);
  return cfg;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kConfigError, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto dir = path.parent_path();
  if (dir.empty()) dir = ".";
  return parse_config(ss.str(), dir, path.string());
}

namespace {

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::string to_yaml(const PipelineConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "strict" << YAML::Value << c.strict;
  out << YAML::Key << "tickers" << YAML::Value << YAML::Flow << c.tickers;

  out << YAML::Key << "paths" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "corpus" << YAML::Value << c.paths.corpus;
  out << YAML::Key << "prices" << YAML::Value << c.paths.prices;
  out << YAML::Key << "rules" << YAML::Value << c.paths.rules;
  out << YAML::Key << "embeddings" << YAML::Value << c.paths.embeddings;
  out << YAML::Key << "outputs" << YAML::Value << c.paths.outputs;
  out << YAML::EndMap;

  out << YAML::Key << "news" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "cutoff" << YAML::Value << format_cutoff(c.news.cutoff);
  out << YAML::Key << "tag" << YAML::Value << c.news.tag_template;
  out << YAML::Key << "grid_minutes" << YAML::Value << c.news.grid_minutes;
  out << YAML::EndMap;

  const auto& po = c.phrases.options;
  out << YAML::Key << "phrases" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << c.phrases.enabled;
  out << YAML::Key << "min_count" << YAML::Value << po.min_count;
  out << YAML::Key << "threshold" << YAML::Value << num(po.threshold);
  out << YAML::Key << "max_vocab" << YAML::Value << po.max_vocab;
  out << YAML::Key << "passes" << YAML::Value << po.passes;
  out << YAML::Key << "delimiter" << YAML::Value << po.delimiter;
  out << YAML::EndMap;

  const auto& e = c.embedding;
  out << YAML::Key << "embedding" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << embedding::to_string(e.mode);
  out << YAML::Key << "algo" << YAML::Value << embedding::to_string(e.algo);
  out << YAML::Key << "window" << YAML::Value << e.window;
  out << YAML::Key << "min_count" << YAML::Value << e.min_count;
  out << YAML::Key << "max_vocab" << YAML::Value << e.max_vocab;
  out << YAML::Key << "negatives" << YAML::Value << e.negatives;
  out << YAML::Key << "epochs" << YAML::Value << e.epochs;
  out << YAML::Key << "alpha0" << YAML::Value << num(e.alpha0);
  out << YAML::Key << "alpha_min" << YAML::Value << num(e.alpha_min);
  out << YAML::Key << "ns_exponent" << YAML::Value << num(e.ns_exponent);
  out << YAML::Key << "dim" << YAML::Value << e.dim;
  out << YAML::Key << "ngram_min" << YAML::Value << e.ngram_min;
  out << YAML::Key << "ngram_max" << YAML::Value << e.ngram_max;
  out << YAML::Key << "buckets" << YAML::Value << e.buckets;
  out << YAML::Key << "sample" << YAML::Value << num(e.sample);
  out << YAML::Key << "seed" << YAML::Value << e.seed;
  out << YAML::Key << "threads" << YAML::Value << e.threads;
  out << YAML::EndMap;

  out << YAML::Key << "protocol" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "train_len" << YAML::Value << c.protocol.train_len;
  out << YAML::Key << "oos_len" << YAML::Value << c.protocol.oos_len;
  out << YAML::EndMap;

  std::vector<std::string> har;
  for (auto f : c.har_models) har.push_back(volatility::to_string(f));
  out << YAML::Key << "har_models" << YAML::Value << YAML::Flow << har;

  out << YAML::Key << "cnn" << YAML::Value << YAML::BeginSeq;
  for (const auto& n : c.cnn) {
    const auto& k = n.config;
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << n.name;
    out << YAML::Key << "filter_widths" << YAML::Value << YAML::Flow << k.filter_widths;
    out << YAML::Key << "filter_sets" << YAML::Value << k.filter_sets;
    out << YAML::Key << "dropout" << YAML::Value << num(k.dropout_rate);
    out << YAML::Key << "l2" << YAML::Value << num(k.l2_decay);
    out << YAML::Key << "seed" << YAML::Value << k.seed;
    out << YAML::Key << "retrain_every" << YAML::Value << k.retrain_every;
    out << YAML::Key << "trainable_embedding" << YAML::Value << k.embedding_trainable;
    out << YAML::Key << "input_days" << YAML::Value << k.input_days;
    out << YAML::Key << "max_len" << YAML::Value << k.max_len;
    out << YAML::Key << "epochs" << YAML::Value << k.epochs;
    out << YAML::Key << "batch_size" << YAML::Value << k.batch_size;
    out << YAML::Key << "early_stop_tol" << YAML::Value << num(k.early_stop_tol);
    out << YAML::Key << "early_stop_patience" << YAML::Value << k.early_stop_patience;
    out << YAML::Key << "adam" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "lr" << YAML::Value << num(k.adam.lr);
    out << YAML::Key << "beta1" << YAML::Value << num(k.adam.beta1);
    out << YAML::Key << "beta2" << YAML::Value << num(k.adam.beta2);
    out << YAML::Key << "eps" << YAML::Value << num(k.adam.eps);
    out << YAML::EndMap;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  std::vector<std::string> losses, panels;
  for (auto l : c.evaluation.losses) losses.push_back(eval::to_string(l));
  for (auto p : c.evaluation.panels) panels.push_back(eval::to_string(p));
  out << YAML::Key << "evaluation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "losses" << YAML::Value << YAML::Flow << losses;
  out << YAML::Key << "panels" << YAML::Value << YAML::Flow << panels;
  out << YAML::Key << "reference" << YAML::Value << c.evaluation.reference;
  out << YAML::Key << "n_boot" << YAML::Value << c.evaluation.rc.n_boot;
  out << YAML::Key << "avg_block" << YAML::Value << num(c.evaluation.rc.avg_block);
  out << YAML::Key << "recentering" << YAML::Value << to_string(c.evaluation.rc.recentering);
  out << YAML::Key << "mda_reference" << YAML::Value << to_string(c.evaluation.rc.mda_reference);
  out << YAML::EndMap;

  out << YAML::Key << "explain" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << c.explain.enabled;
  out << YAML::Key << "tokens" << YAML::Value << YAML::Flow << c.explain.tokens;
  out << YAML::Key << "method" << YAML::Value << to_string(c.explain.quadrature.method);
  out << YAML::Key << "steps" << YAML::Value << c.explain.quadrature.steps;
  out << YAML::Key << "batch" << YAML::Value << c.explain.quadrature.batch;
  out << YAML::Key << "max_days" << YAML::Value << c.explain.max_days;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace voltext::pipeline
