#include "ccdrift/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "binio.hpp"
#include "ccdrift/random.hpp"

namespace ccdrift {
namespace {

const std::string kMagic = "CCDEMB01";

double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }
double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double dot(const double* a, const double* b, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector sizes differ");
  return dot(a.data(), b.data(), static_cast<int>(a.size()));
}

std::vector<std::string> distinct(const std::vector<std::string>& words) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& w : words)
    if (seen.insert(w).second) out.push_back(w);
  return out;
}

// Emits [w, p1, p2] for each w; partners come from `from`.
std::vector<std::string> interleave(const std::vector<std::string>& words,
                                    const std::vector<std::string>& from, Rng& rng) {
  const auto pool = distinct(from);
  std::vector<std::string> out;
  out.reserve(words.size() * 3);
  for (const auto& w : words) {
    out.push_back(w);
    const auto a = uniform_index(rng, pool.size());
    out.push_back(pool[a]);
    if (pool.size() < 2) {
      out.push_back(pool[uniform_index(rng, pool.size())]);
    } else {
      auto b = uniform_index(rng, pool.size() - 1);
      if (b >= a) ++b;
      out.push_back(pool[b]);
    }
  }
  return out;
}

}  // namespace

void SkipgramConfig::validate() const {
  if (window_radius <= 0 || embedding_dim <= 0 || negative_samples <= 0 || epochs <= 0)
    throw std::invalid_argument("skip-gram counts must be positive");
  if (!(learning_rate > 0)) throw std::invalid_argument("learning rate must be positive");
}

EmbeddingModel::EmbeddingModel(std::vector<std::string> vocab, int dim, std::vector<double> input,
                               std::vector<double> output, SkipgramConfig config)
    : vocab_(std::move(vocab)),
      dim_(dim),
      input_(std::move(input)),
      output_(std::move(output)),
      config_(config) {
  if (dim_ <= 0) throw std::invalid_argument("embedding dimension must be positive");
  const auto need = vocab_.size() * static_cast<std::size_t>(dim_);
  if (input_.size() != need || output_.size() != need)
    throw std::invalid_argument("vector table size does not match vocabulary");
  for (std::size_t i = 0; i < vocab_.size(); ++i)
    if (!index_.emplace(vocab_[i], i).second) throw std::invalid_argument("duplicate word: " + vocab_[i]);
  config_.embedding_dim = dim_;
}

std::optional<std::size_t> EmbeddingModel::index_of(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool EmbeddingModel::operator==(const EmbeddingModel& o) const {
  return vocab_ == o.vocab_ && dim_ == o.dim_ && input_ == o.input_ && output_ == o.output_;
}

void EmbeddingModel::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  detail::put_u64(os, static_cast<std::uint64_t>(dim_));
  detail::put_u64(os, vocab_.size());
  detail::put_u64(os, config_.seed);
  detail::put_i64(os, config_.window_radius);
  detail::put_i64(os, config_.negative_samples);
  detail::put_i64(os, config_.epochs);
  detail::put_f64(os, config_.learning_rate);
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    detail::put_str(os, vocab_[i]);
    for (int d = 0; d < dim_; ++d) detail::put_f64(os, input(i)[d]);
    for (int d = 0; d < dim_; ++d) detail::put_f64(os, output(i)[d]);
  }
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

EmbeddingModel EmbeddingModel::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  detail::expect_magic(is, kMagic);
  SkipgramConfig cfg;
  const auto dim = detail::get_u64(is);
  const auto n = detail::get_u64(is);
  if (dim == 0 || dim > 100000) throw std::runtime_error("corrupt embedding dimension");
  cfg.seed = detail::get_u64(is);
  cfg.window_radius = static_cast<int>(detail::get_i64(is));
  cfg.negative_samples = static_cast<int>(detail::get_i64(is));
  cfg.epochs = static_cast<int>(detail::get_i64(is));
  cfg.learning_rate = detail::get_f64(is);
  std::vector<std::string> vocab;
  std::vector<double> in, out;
  for (std::uint64_t i = 0; i < n; ++i) {
    vocab.push_back(detail::get_str(is));
    for (std::uint64_t d = 0; d < dim; ++d) in.push_back(detail::get_f64(is));
    for (std::uint64_t d = 0; d < dim; ++d) out.push_back(detail::get_f64(is));
  }
  return EmbeddingModel(std::move(vocab), static_cast<int>(dim), std::move(in), std::move(out), cfg);
}

PairDocuments build_documents(const TokenSequence& comment, const TokenSequence& code, std::uint64_t seed) {
  PairDocuments d;
  d.comment_doc.origin = Origin::comment;
  d.code_doc.origin = Origin::code;
  if (comment.empty() || code.empty()) {
    d.degenerate = true;
    const auto& only = comment.empty() ? code.tokens : comment.tokens;
    d.comment_doc.tokens = only;
    d.code_doc.tokens = only;
    return d;
  }
  Rng rng(derive_seed(seed, 0));
  d.comment_doc.tokens = interleave(comment.tokens, code.tokens, rng);
  d.code_doc.tokens = interleave(code.tokens, comment.tokens, rng);
  return d;
}

PairDocuments build_documents(const CodeCommentPair& pair, std::uint64_t seed) {
  return build_documents(normalize(pair.comment_text, Origin::comment),
                         normalize(code_text(pair), Origin::code), seed);
}

EmbeddingModel train_skipgram(const std::vector<TokenSequence>& corpus, const SkipgramConfig& config) {
  config.validate();
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total_words = 0;
  for (const auto& s : corpus)
    for (const auto& w : s.tokens) {
      ++counts[w];
      ++total_words;
    }
  if (counts.empty()) throw std::invalid_argument("empty training corpus");

  std::vector<std::string> vocab;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<double> cumulative;
  double acc = 0;
  for (const auto& [w, c] : counts) {
    index.emplace(w, vocab.size());
    vocab.push_back(w);
    acc += std::pow(static_cast<double>(c), 0.75);
    cumulative.push_back(acc);
  }

  const int dim = config.embedding_dim;
  const std::size_t n = vocab.size();
  Rng rng(derive_seed(config.seed, 1));
  std::vector<double> in(n * dim), out(n * dim, 0.0);
  for (auto& x : in) x = (uniform_real(rng) - 0.5) / dim;

  std::vector<std::vector<std::size_t>> sentences;
  for (const auto& s : corpus) {
    std::vector<std::size_t> ids;
    for (const auto& w : s.tokens) ids.push_back(index.at(w));
    sentences.push_back(std::move(ids));
  }

  auto draw = [&]() {
    const double r = uniform_real(rng) * acc;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), n - 1);
  };

  const double schedule = static_cast<double>(total_words) * config.epochs;
  std::uint64_t processed = 0;
  std::vector<double> grad(dim);
  std::vector<double> objective;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double obj = 0;
    std::uint64_t pairs = 0;
    for (const auto& s : sentences) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double lr = config.learning_rate * std::max(1e-4, 1.0 - processed / schedule);
        ++processed;
        double* v = in.data() + s[i] * dim;
        const std::size_t lo = i >= static_cast<std::size_t>(config.window_radius) ? i - config.window_radius : 0;
        const std::size_t hi = std::min(s.size() - 1, i + config.window_radius);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          std::fill(grad.begin(), grad.end(), 0.0);
          for (int t = 0; t <= config.negative_samples; ++t) {
            std::size_t target;
            double label;
            if (t == 0) {
              target = s[j];
              label = 1.0;
            } else {
              target = draw();
              if (target == s[j]) continue;
              label = 0.0;
            }
            double* u = out.data() + target * dim;
            const double f = dot(v, u, dim);
            obj += label > 0 ? log_sigmoid(f) : log_sigmoid(-f);
            const double g = (label - sigmoid(f)) * lr;
            for (int d = 0; d < dim; ++d) grad[d] += g * u[d];
            for (int d = 0; d < dim; ++d) u[d] += g * v[d];
          }
          for (int d = 0; d < dim; ++d) v[d] += grad[d];
          ++pairs;
        }
      }
    }
    objective.push_back(pairs ? obj / static_cast<double>(pairs) : 0.0);
  }

  SkipgramConfig cfg = config;
  EmbeddingModel model(std::move(vocab), dim, std::move(in), std::move(out), cfg);
  model.set_epoch_objective(std::move(objective));
  return model;
}

double ns_objective(const std::vector<double>& center, const std::vector<double>& context,
                    const std::vector<std::vector<double>>& negatives) {
  double obj = log_sigmoid(dot(context, center));
  for (const auto& u : negatives) obj += log_sigmoid(-dot(u, center));
  return obj;
}

NsGradient ns_gradient(const std::vector<double>& center, const std::vector<double>& context,
                       const std::vector<std::vector<double>>& negatives) {
  const std::size_t dim = center.size();
  NsGradient g;
  g.center.assign(dim, 0.0);
  const double a = 1.0 - sigmoid(dot(context, center));
  g.context.resize(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    g.center[d] += a * context[d];
    g.context[d] = a * center[d];
  }
  for (const auto& u : negatives) {
    const double b = -sigmoid(dot(u, center));
    std::vector<double> gu(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      g.center[d] += b * u[d];
      gu[d] = b * center[d];
    }
    g.negatives.push_back(std::move(gu));
  }
  return g;
}

double sim_ww(const std::string& w1, const std::string& w2, const EmbeddingModel& model) {
  const auto a = model.index_of(w1);
  const auto b = model.index_of(w2);
  if (!a || !b) return 0.0;
  const double* x = model.input(*a);
  const double* y = model.input(*b);
  const int n = model.dim();
  const double nx = std::sqrt(dot(x, x, n));
  const double ny = std::sqrt(dot(y, y, n));
  if (nx == 0 || ny == 0) return 0.0;
  if (*a == *b) return 1.0;
  return std::clamp(dot(x, y, n) / (nx * ny), -1.0, 1.0);
}

double sim_ws(const std::string& w, const std::vector<std::string>& s, const EmbeddingModel& model) {
  if (s.empty()) return 0.0;
  double best = -1.0;
  for (const auto& x : s) best = std::max(best, sim_ww(w, x, model));
  return best;
}

double sim_ss(const std::vector<std::string>& s1, const std::vector<std::string>& s2,
              const EmbeddingModel& model) {
  if (s1.empty() || s2.empty()) return 0.0;
  double a = 0, b = 0;
  for (const auto& w : s1) a += sim_ws(w, s2, model);
  for (const auto& w : s2) b += sim_ws(w, s1, model);
  return 0.5 * (a / static_cast<double>(s1.size()) + b / static_cast<double>(s2.size()));
}

double sim_ss(const TokenSequence& s1, const TokenSequence& s2, const EmbeddingModel& model) {
  return sim_ss(s1.tokens, s2.tokens, model);
}

}  // namespace ccdrift
