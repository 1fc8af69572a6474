#include "voltext/embedding/evaluate.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "voltext/common/csv.h"
#include "voltext/common/error.h"
#include "voltext/common/stats.h"
#include "voltext/textprep/clean.h"

namespace voltext::embedding {

namespace {

std::vector<double> unit_of(std::vector<double> v) {
  double n = std::sqrt(dot<double, double>(v, v));
  if (n > 0) {
    for (auto& x : v) x /= n;
  }
  return v;
}

std::vector<double> unit_resolved(const WordVectors& wv, std::string_view token) {
  auto id = wv.find(token);
  if (id >= 0) {
    auto u = wv.unit(std::size_t(id));
    return {u.begin(), u.end()};
  }
  return unit_of(wv.resolve(token));
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double na = std::sqrt(dot<double, double>(a, a));
  double nb = std::sqrt(dot<double, double>(b, b));
  if (na == 0 || nb == 0) return 0.0;
  return dot<double, double>(a, b) / (na * nb);
}

}  // namespace

std::vector<double> cosine_scan(const WordVectors& wv, std::span<const double> query,
                                Exec exec) {
  const std::size_t n = wv.size();
  std::vector<double> out(n, 0.0);
  double qn = std::sqrt(dot<double, double>(query, query));
  if (qn == 0) return out;
  const auto& unit = wv.unit_vectors();
  if (exec == Exec::kSerial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = dot<double, double>(unit.row(i), query) / qn;
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) {
      out[std::size_t(i)] = dot<double, double>(unit.row(std::size_t(i)), query) / qn;
    }
  }
  return out;
}

std::vector<Neighbor> rank_by_cosine(const WordVectors& wv, std::span<const double> query,
                                     std::span<const std::int32_t> exclude, std::size_t top_n,
                                     Exec exec) {
  auto scores = cosine_scan(wv, query, exec);
  std::vector<std::int32_t> order;
  order.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::find(exclude.begin(), exclude.end(), std::int32_t(i)) == exclude.end()) {
      order.push_back(std::int32_t(i));
    }
  }
  auto better = [&](std::int32_t x, std::int32_t y) {
    if (scores[std::size_t(x)] != scores[std::size_t(y)]) return scores[std::size_t(x)] > scores[std::size_t(y)];
    return x < y;
  };
  std::size_t keep = top_n == 0 ? order.size() : std::min(top_n, order.size());
  std::partial_sort(order.begin(), order.begin() + std::ptrdiff_t(keep), order.end(), better);
  order.resize(keep);
  std::vector<Neighbor> out;
  out.reserve(keep);
  for (auto i : order) out.push_back({wv.token(std::size_t(i)), i, scores[std::size_t(i)]});
  return out;
}

std::vector<Neighbor> analogy(const WordVectors& wv, std::string_view a, std::string_view b,
                              std::string_view c, bool exclude_inputs, std::size_t top_n) {
  auto ua = unit_resolved(wv, a);
  auto ub = unit_resolved(wv, b);
  auto uc = unit_resolved(wv, c);
  std::vector<double> d(ua.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = ub[i] - ua[i] + uc[i];
  std::vector<std::int32_t> exclude;
  if (exclude_inputs) {
    for (auto t : {a, b, c}) {
      auto id = wv.find(t);
      if (id >= 0) exclude.push_back(id);
    }
  }
  return rank_by_cosine(wv, d, exclude, top_n);
}

std::string format_analogy(std::string_view a, std::string_view b, std::string_view c,
                           std::string_view answer) {
  std::string s;
  s.append(a).append(":").append(b).append(" :: ").append(c).append(":").append(answer);
  return s;
}

std::vector<AnalogySection> parse_analogy_benchmark(std::istream& in) {
  std::vector<AnalogySection> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == ':') {
      auto name = trim(t.substr(1));
      if (name.empty()) {
        fail(ErrorCode::kMalformedBenchmark, "line " + std::to_string(lineno) + ": empty section name");
      }
      out.push_back({std::string(name), {}});
      continue;
    }
    std::istringstream ss{std::string(t)};
    std::vector<std::string> words;
    for (std::string w; ss >> w;) words.push_back(textprep::to_lower_ascii(w));
    if (words.size() != 4) {
      fail(ErrorCode::kMalformedBenchmark,
           "line " + std::to_string(lineno) + ": expected 4 tokens, got " + std::to_string(words.size()));
    }
    if (out.empty()) {
      fail(ErrorCode::kMalformedBenchmark, "line " + std::to_string(lineno) + ": question before any section");
    }
    out.back().questions.push_back({words[0], words[1], words[2], words[3]});
  }
  return out;
}

std::vector<AnalogySection> load_analogy_benchmark(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path);
  return parse_analogy_benchmark(in);
}

std::optional<double> SectionScore::accuracy() const {
  if (answered == 0) return std::nullopt;
  return double(correct) / double(answered);
}

AnalogyReport evaluate_analogy_suite(const std::vector<AnalogySection>& bench,
                                     const WordVectors& wv) {
  AnalogyReport report;
  report.overall.name = "overall";
  for (const auto& section : bench) {
    SectionScore s;
    s.name = section.name;
    for (const auto& q : section.questions) {
      bool ok = wv.find(q.expected) >= 0;
      for (const auto* t : {&q.a, &q.b, &q.c}) ok = ok && wv.can_resolve(*t);
      if (!ok) {
        ++s.skipped;
        continue;
      }
      auto top = analogy(wv, q.a, q.b, q.c, true, 1);
      ++s.answered;
      if (!top.empty() && top.front().token == q.expected) ++s.correct;
    }
    report.overall.correct += s.correct;
    report.overall.answered += s.answered;
    report.overall.skipped += s.skipped;
    report.sections.push_back(std::move(s));
  }
  return report;
}

std::vector<SimilarityPair> parse_similarity_pairs(std::istream& in) {
  std::vector<SimilarityPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    char delim = t.find('\t') != std::string_view::npos ? '\t' : ',';
    auto f = split_line(t, delim);
    if (f.size() < 3) {
      fail(ErrorCode::kFormatError, "line " + std::to_string(lineno) + ": expected token, token, score");
    }
    double score;
    try {
      score = parse_double(trim(f[2]));
    } catch (const Error&) {
      if (out.empty()) continue;  // header row
      throw;
    }
    out.push_back({textprep::to_lower_ascii(std::string(trim(f[0]))),
                   textprep::to_lower_ascii(std::string(trim(f[1]))), score});
  }
  return out;
}

std::vector<SimilarityPair> load_similarity_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path);
  return parse_similarity_pairs(in);
}

SimilarityReport evaluate_similarity(const std::vector<SimilarityPair>& pairs,
                                     const WordVectors& wv) {
  SimilarityReport r;
  std::vector<double> model, human;
  for (const auto& p : pairs) {
    if (!wv.can_resolve(p.a) || !wv.can_resolve(p.b)) {
      ++r.skipped;
      continue;
    }
    model.push_back(cosine(wv.resolve(p.a), wv.resolve(p.b)));
    human.push_back(p.score);
  }
  r.used = model.size();
  if (r.used < 2) {
    fail(ErrorCode::kTooFewPairs, std::to_string(r.used) + " resolvable pairs, need at least 2");
  }
  r.spearman = stats::spearman(model, human);
  return r;
}

std::vector<Neighbor> most_similar(const WordVectors& wv, std::string_view token,
                                   std::size_t top_n) {
  auto q = unit_resolved(wv, token);
  std::vector<std::int32_t> exclude;
  if (auto id = wv.find(token); id >= 0) exclude.push_back(id);
  return rank_by_cosine(wv, q, exclude, top_n);
}

std::string odd_one_out(const WordVectors& wv, const std::vector<std::string>& tokens) {
  if (tokens.size() < 3) {
    fail(ErrorCode::kInvalidArgument, "odd_one_out needs at least three tokens");
  }
  std::vector<std::vector<double>> units;
  for (const auto& t : tokens) units.push_back(unit_resolved(wv, t));
  const std::size_t dim = units.front().size();
  std::vector<double> total(dim, 0.0);
  for (const auto& u : units) {
    for (std::size_t i = 0; i < dim; ++i) total[i] += u[i];
  }
  // A token that appears twice always has a copy of itself among "the
  // others", so it is only chosen when every token is duplicated.
  std::size_t best = tokens.size();
  double best_cos = INFINITY;
  bool best_dup = true;
  for (std::size_t j = 0; j < tokens.size(); ++j) {
    bool dup = std::count(tokens.begin(), tokens.end(), tokens[j]) > 1;
    std::vector<double> others(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      others[i] = (total[i] - units[j][i]) / double(tokens.size() - 1);
    }
    double c = cosine(units[j], others);
    bool take = best == tokens.size() || (best_dup && !dup) || (dup == best_dup && c < best_cos);
    if (take) {
      best = j;
      best_cos = c;
      best_dup = dup;
    }
  }
  return tokens[best];
}

PcaProjection pca_project(const Matrix<double>& points, std::size_t dims) {
  const std::size_t n = points.rows();
  const std::size_t m = points.cols();
  if (n < 2) fail(ErrorCode::kInvalidArgument, "PCA needs at least 2 points");
  if (dims == 0 || dims > m) fail(ErrorCode::kInvalidArgument, "invalid PCA dimension");
  Eigen::MatrixXd x(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) x(Eigen::Index(r), Eigen::Index(c)) = points(r, c);
  }
  Eigen::RowVectorXd mu = x.colwise().mean();
  x.rowwise() -= mu;
  Eigen::MatrixXd cov = (x.transpose() * x) / double(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  // Ascending eigenvalues: take from the back.
  PcaProjection out;
  out.mean.assign(mu.data(), mu.data() + m);
  out.components = Matrix<double>(dims, m);
  for (std::size_t k = 0; k < dims; ++k) {
    Eigen::VectorXd v = es.eigenvectors().col(Eigen::Index(m - 1 - k));
    Eigen::Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    for (std::size_t c = 0; c < m; ++c) out.components(k, c) = v(Eigen::Index(c));
    out.eigenvalues.push_back(std::max(0.0, es.eigenvalues()(Eigen::Index(m - 1 - k))));
  }
  out.coords = Matrix<double>(n, dims);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < dims; ++k) {
      double s = 0.0;
      for (std::size_t c = 0; c < m; ++c) s += x(Eigen::Index(r), Eigen::Index(c)) * out.components(k, c);
      out.coords(r, k) = s;
    }
  }
  return out;
}

PcaProjection pca_project(const WordVectors& wv, const std::vector<std::string>& tokens,
                          std::size_t dims) {
  if (tokens.size() < 2) fail(ErrorCode::kInvalidArgument, "PCA needs at least 2 tokens");
  Matrix<double> pts(tokens.size(), wv.dim());
  for (std::size_t r = 0; r < tokens.size(); ++r) {
    auto v = wv.resolve(tokens[r]);
    std::copy(v.begin(), v.end(), pts.row(r).begin());
  }
  auto out = pca_project(pts, dims);
  out.tokens = tokens;
  return out;
}

}  // namespace voltext::embedding
