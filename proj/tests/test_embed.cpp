#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "ccdrift/embed.hpp"
#include "ccdrift/pipeline.hpp"
#include "ccdrift/random.hpp"
#include "fixture.hpp"

using namespace ccdrift;

namespace {

EmbeddingModel hand_model(const std::vector<std::string>& vocab, const std::vector<std::vector<double>>& vecs) {
  const int dim = static_cast<int>(vecs.front().size());
  std::vector<double> in, out(vocab.size() * vecs.front().size(), 0.0);
  for (const auto& v : vecs) in.insert(in.end(), v.begin(), v.end());
  return EmbeddingModel(vocab, dim, in, out);
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return d / std::sqrt(na * nb);
}

TokenSequence seq(std::vector<std::string> t) { return TokenSequence{std::move(t), Origin::code}; }

}  // namespace

TEST_CASE("sim_ww is the cosine of input vectors") {
  const auto m = hand_model({"a", "b", "c"}, {{1, 0}, {0, 1}, {1, 1}});
  CHECK(sim_ww("a", "a", m) == 1.0);
  CHECK(sim_ww("a", "b", m) == doctest::Approx(0.0));
  CHECK(sim_ww("c", "a", m) == doctest::Approx(0.7071).epsilon(1e-4));
  CHECK(sim_ww("a", "zzz", m) == 0.0);
}

TEST_CASE("sim_ws and sim_ss against direct evaluation") {
  const std::vector<std::string> vocab = {"w0", "w1", "w2", "w3", "w4", "w5", "w6", "w7", "w8", "w9"};
  Rng rng(derive_seed(5, 0));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> vecs;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      std::vector<double> v(4);
      for (auto& x : v) x = uniform_real(rng) * 2 - 1;
      vecs.push_back(v);
    }
    const auto m = hand_model(vocab, vecs);
    auto pick = [&](std::size_t n) {
      std::vector<std::string> s;
      for (std::size_t i = 0; i < n; ++i) s.push_back(vocab[uniform_index(rng, vocab.size())]);
      return s;
    };
    const auto s1 = pick(3), s2 = pick(2);
    auto ws = [&](const std::string& w, const std::vector<std::string>& s) {
      double best = -2;
      const auto iw = std::find(vocab.begin(), vocab.end(), w) - vocab.begin();
      for (const auto& x : s) {
        const auto ix = std::find(vocab.begin(), vocab.end(), x) - vocab.begin();
        best = std::max(best, iw == ix ? 1.0 : cosine(vecs[iw], vecs[ix]));
      }
      return best;
    };
    for (const auto& w : s1) CHECK(std::abs(sim_ws(w, s2, m) - ws(w, s2)) < 1e-10);
    double d12 = 0, d21 = 0;
    for (const auto& w : s1) d12 += ws(w, s2);
    for (const auto& w : s2) d21 += ws(w, s1);
    const double oracle = 0.5 * (d12 / 3 + d21 / 2);
    CHECK(std::abs(sim_ss(s1, s2, m) - oracle) < 1e-10);
    CHECK(std::abs(sim_ss(s1, s2, m) - sim_ss(s2, s1, m)) < 1e-12);
    CHECK(sim_ss(s1, s1, m) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto m = hand_model({"a", "b"}, {{1, 0}, {0, 1}});
  CHECK(sim_ws("a", {}, m) == 0.0);
  CHECK(sim_ws("a", {"b"}, m) == sim_ww("a", "b", m));
  CHECK(sim_ws("a", {"b", "a"}, m) == 1.0);
  CHECK(sim_ss(std::vector<std::string>{}, std::vector<std::string>{"a"}, m) == 0.0);
}

TEST_CASE("negative-sampling gradient matches central differences") {
  Rng rng(derive_seed(3, 0));
  auto vec = [&] {
    std::vector<double> v(6);
    for (auto& x : v) x = uniform_real(rng) - 0.5;
    return v;
  };
  for (int trial = 0; trial < 20; ++trial) {
    auto c = vec(), u = vec();
    std::vector<std::vector<double>> neg = {vec(), vec(), vec()};
    const auto g = ns_gradient(c, u, neg);
    const double h = 1e-6;
    auto check = [&](std::vector<double>& x, const std::vector<double>& analytic) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = x[i];
        x[i] = keep + h;
        const double up = ns_objective(c, u, neg);
        x[i] = keep - h;
        const double down = ns_objective(c, u, neg);
        x[i] = keep;
        const double numeric = (up - down) / (2 * h);
        CHECK(std::abs(numeric - analytic[i]) <= 1e-4 * std::max(1.0, std::abs(analytic[i])));
      }
    };
    check(c, g.center);
    check(u, g.context);
    for (std::size_t n = 0; n < neg.size(); ++n) check(neg[n], g.negatives[n]);
  }
}

TEST_CASE("documents interleave two partner words per source word") {
  const auto comment = seq({"set", "serno", "size"});
  const auto code = seq({"gener", "set", "octet", "size"});
  const auto d = build_documents(comment, code, 11);
  CHECK_FALSE(d.degenerate);
  REQUIRE(d.comment_doc.size() == 9);
  REQUIRE(d.code_doc.size() == 12);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(d.comment_doc.tokens[3 * i] == comment.tokens[i]);
    for (std::size_t k = 1; k <= 2; ++k)
      CHECK(std::count(code.tokens.begin(), code.tokens.end(), d.comment_doc.tokens[3 * i + k]) > 0);
    CHECK(d.comment_doc.tokens[3 * i + 1] != d.comment_doc.tokens[3 * i + 2]);
  }
  const auto again = build_documents(comment, code, 11);
  CHECK(again.comment_doc == d.comment_doc);
  CHECK(again.code_doc == d.code_doc);

  const auto one = build_documents(seq({"success"}), seq({"run", "job"}), 1);
  REQUIRE(one.comment_doc.size() == 3);
  CHECK(one.comment_doc.tokens[0] == "success");
  std::vector<std::string> partners(one.comment_doc.tokens.begin() + 1, one.comment_doc.tokens.end());
  std::sort(partners.begin(), partners.end());
  CHECK(partners == std::vector<std::string>{"job", "run"});

  const auto lone = build_documents(seq({"success"}), seq({"run"}), 1);
  CHECK(lone.comment_doc.tokens == std::vector<std::string>{"success", "run", "run"});

  const auto empty = build_documents(seq({}), code, 1);
  CHECK(empty.degenerate);
  CHECK(empty.comment_doc.tokens == code.tokens);
}

TEST_CASE("skip-gram training") {
  // "alpha" and "beta" always share sentences; "gamma" never meets "alpha"
  std::vector<TokenSequence> corpus;
  Rng rng(derive_seed(9, 0));
  const std::vector<std::string> filler = {"f0", "f1", "f2", "f3", "f4", "f5", "f6", "f7"};
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> s;
    for (int k = 0; k < 3; ++k) s.push_back(filler[uniform_index(rng, filler.size())]);
    if (i % 2 == 0) {
      s.insert(s.begin() + 1, "alpha");
      s.insert(s.begin() + 2, "beta");
    } else {
      s.insert(s.begin() + 1, "gamma");
      s.insert(s.begin() + 2, "delta");
    }
    corpus.push_back(seq(s));
  }
  SkipgramConfig cfg;
  cfg.embedding_dim = 20;
  cfg.epochs = 10;
  const auto m = train_skipgram(corpus, cfg);
  CHECK(m.vocab_size() == 12);
  CHECK(sim_ww("alpha", "beta", m) > sim_ww("alpha", "gamma", m));

  const auto again = train_skipgram(corpus, cfg);
  CHECK(again == m);

  for (std::size_t i = 0; i < m.vocab_size(); ++i) {
    double norm = 0;
    for (int k = 0; k < m.dim(); ++k) {
      CHECK(std::isfinite(m.input(i)[k]));
      CHECK(std::isfinite(m.output(i)[k]));
      norm += m.input(i)[k] * m.input(i)[k];
    }
    CHECK(norm > 0);
  }
  CHECK(m.epoch_objective().size() == 10);

  CHECK_THROWS_AS(train_skipgram({}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(train_skipgram({seq({})}, cfg), std::invalid_argument);
  SkipgramConfig bad;
  bad.window_radius = 0;
  CHECK_THROWS_AS(train_skipgram(corpus, bad), std::invalid_argument);
}

TEST_CASE("objective does not fall over the final half on the fixture corpus") {
  const auto records = mine_repository(fixture_repo()).records;
  REQUIRE_FALSE(records.empty());
  SkipgramConfig cfg;
  cfg.epochs = 10;
  const auto m = train_skipgram(embedding_corpus(records, derive_seed(1, 4)), cfg);
  const auto& obj = m.epoch_objective();
  REQUIRE(obj.size() == 10);
  for (std::size_t e = obj.size() / 2 + 1; e < obj.size(); ++e) CHECK(obj[e] >= obj[e - 1]);
}

TEST_CASE("embedding files round-trip") {
  const auto m = train_skipgram({seq({"a", "b", "c", "a"}), seq({"c", "d"})}, SkipgramConfig{2, 8, 2, 2, 0.05, 4});
  const auto dir = std::filesystem::path(CCDRIFT_WORK_DIR);
  std::filesystem::create_directories(dir);
  m.save(dir / "emb.bin");
  CHECK(EmbeddingModel::load(dir / "emb.bin") == m);
  CHECK_THROWS(EmbeddingModel::load(dir / "missing.bin"));
}
