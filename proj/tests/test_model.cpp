#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <set>
#include <sstream>

#include "ccdrift/forest.hpp"
#include "ccdrift/metrics.hpp"
#include "ccdrift/random.hpp"

using namespace ccdrift;

namespace {

double gini_oracle(const std::vector<int>& y) {
  if (y.empty()) return 0;
  const double p = static_cast<double>(std::count(y.begin(), y.end(), 1)) / static_cast<double>(y.size());
  return 2 * p * (1 - p);
}

struct Data {
  std::vector<std::vector<double>> X;
  std::vector<int> y;
};

// Label decided by feature `signal`; the other columns are noise.
Data planted(std::size_t rows, std::size_t width, std::size_t signal, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  Data d;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> x(width);
    for (auto& v : x) v = uniform_real(rng);
    d.y.push_back(x[signal] > 0.5 ? 1 : 0);
    d.X.push_back(std::move(x));
  }
  return d;
}

Hyperparams small(int trees = 20) {
  Hyperparams hp;
  hp.n_trees = trees;
  hp.threads = 1;
  return hp;
}

DecisionTree stump(double threshold, double p_left, double p_right) {
  DecisionTree t;
  t.nodes = {{0, threshold, 1, 2, 0, 0, 2, 0.5}, {}, {}};
  t.nodes[1].p1 = p_left;
  t.nodes[1].p0 = 1 - p_left;
  t.nodes[2].p1 = p_right;
  t.nodes[2].p0 = 1 - p_right;
  return t;
}

}  // namespace

TEST_CASE("impurity values") {
  CHECK(gini(4, 0) == 0.0);
  CHECK(gini(2, 2) == doctest::Approx(0.5));
  CHECK(gini(1, 3) == doctest::Approx(0.375));
  CHECK(gini(0, 0) == 0.0);
  CHECK(entropy(1, 1) == doctest::Approx(1.0));
  CHECK(entropy(3, 0) == 0.0);
  CHECK(gain({0, 0, 1, 1}, {0, 0}, {1, 1}) == doctest::Approx(0.5));
  CHECK(gain({0, 0, 1, 1}, {0, 1}, {0, 1}) == doctest::Approx(0.0));
  CHECK(gain({0, 0, 1, 1}, {0}, {0, 1, 1}) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("impurity over every small labelled set") {
  for (std::size_t n = 1; n <= 8; ++n)
    for (std::size_t pos = 0; pos <= n; ++pos) {
      std::vector<int> y(n, 0);
      std::fill(y.begin(), y.begin() + static_cast<long>(pos), 1);
      CHECK(std::abs(gini(y) - gini_oracle(y)) < 1e-12);
      // every split point of every ordering given by a bitmask
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> l, r;
        for (std::size_t i = 0; i < n; ++i) (mask >> i & 1 ? l : r).push_back(y[i]);
        const double oracle = gini_oracle(y) - static_cast<double>(l.size()) / n * gini_oracle(l) -
                              static_cast<double>(r.size()) / n * gini_oracle(r);
        CHECK(std::abs(gain(y, l, r) - oracle) < 1e-12);
        CHECK(gain(y, l, r) >= -1e-12);
      }
    }
}

TEST_CASE("forest separates planted data and is deterministic") {
  const auto d = planted(400, 6, 2, 7);
  const auto f = train_forest(d.X, d.y, small());
  std::size_t right = 0;
  for (std::size_t i = 0; i < d.X.size(); ++i) right += predict(f, d.X[i]).label == d.y[i];
  CHECK(right == d.X.size());
  CHECK(train_forest(d.X, d.y, small()) == f);
  auto threaded = small();
  threaded.threads = 4;
  CHECK(train_forest(d.X, d.y, threaded).trees == f.trees);
}

TEST_CASE("depth-one trees cannot learn XOR") {
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  for (int r = 0; r < 40; ++r) {
    const int a = r & 1, b = (r >> 1) & 1;
    X.push_back({double(a), double(b)});
    y.push_back(a ^ b);
  }
  auto hp = small(10);
  hp.max_depth = 1;
  const auto f = train_forest(X, y, hp);
  std::size_t right = 0;
  for (std::size_t i = 0; i < X.size(); ++i) right += predict(f, X[i]).label == y[i];
  CHECK(right < X.size());
}

TEST_CASE("root split maximizes gain over all features and thresholds") {
  Rng rng(derive_seed(11, 0));
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    for (int r = 0; r < 12; ++r) {
      X.push_back({double(uniform_index(rng, 4)), double(uniform_index(rng, 4)), double(uniform_index(rng, 4))});
      y.push_back(static_cast<int>(uniform_index(rng, 2)));
    }
    if (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), 0) == 0) continue;
    auto hp = small(1);
    hp.bootstrap = false;
    hp.max_features = MaxFeatures::all;
    hp.max_depth = 1;
    const auto f = train_forest(X, y, hp);
    double best = 0;
    for (std::size_t j = 0; j < 3; ++j)
      for (double t : {0.0, 1.0, 2.0}) {
        std::vector<int> l, r;
        for (std::size_t i = 0; i < X.size(); ++i) (X[i][j] <= t ? l : r).push_back(y[i]);
        best = std::max(best, gain(y, l, r));
      }
    const auto& root = f.trees[0].nodes[0];
    if (root.is_leaf()) {
      CHECK(best <= 1e-12);
      continue;
    }
    std::vector<int> l, r;
    for (std::size_t i = 0; i < X.size(); ++i)
      (X[i][static_cast<std::size_t>(root.feature)] <= root.threshold ? l : r).push_back(y[i]);
    CHECK(gain(y, l, r) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("prediction averages tree leaves") {
  Forest f;
  f.trees = {stump(0.5, 0.2, 0.9), stump(0.5, 0.8, 0.1)};
  f.kept_mask = {true};
  const auto p = predict(f, {0.0});
  CHECK(p.probability == doctest::Approx(0.5));
  CHECK(p.label == 1);
  CHECK(predict(f, {1.0}).probability == doctest::Approx(0.5));
  std::swap(f.trees[0], f.trees[1]);
  CHECK(predict(f, {0.0}).probability == p.probability);
  f.trees = {stump(0.5, 0.2, 0.2)};
  CHECK(predict(f, {0.0}).label == 0);
}

TEST_CASE("feature importance") {
  const auto d = planted(300, 5, 3, 13);
  const auto f = train_forest(d.X, d.y, small());
  const auto imp = feature_importance(f);
  REQUIRE(imp.size() == 5);
  CHECK(std::accumulate(imp.begin(), imp.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::max_element(imp.begin(), imp.end()) - imp.begin() == 3);

  const auto masked = train_forest(d.X, d.y, small(), {true, true, false, true, true});
  CHECK(feature_importance(masked)[2] == 0.0);

  std::vector<std::vector<double>> X = {{0, 5}, {0, 5}, {1, 5}, {1, 5}};
  const std::vector<int> y = {0, 0, 1, 1};
  auto hp = small(1);
  hp.bootstrap = false;
  hp.max_features = MaxFeatures::all;
  const auto one = feature_importance(train_forest(X, y, hp));
  CHECK(one == std::vector<double>{1.0, 0.0});
}

TEST_CASE("forest errors") {
  CHECK_THROWS_AS(train_forest({{1}, {2}}, {1, 1}, small()), std::invalid_argument);
  CHECK_THROWS_AS(train_forest({{1}, {2}}, {1}, small()), std::invalid_argument);
  auto bad = small();
  bad.n_trees = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("forest files round-trip") {
  const auto d = planted(100, 3, 0, 3);
  const auto f = train_forest(d.X, d.y, small(5), {true, false, true}, {"a", "b", "c"});
  const auto dir = std::filesystem::path(CCDRIFT_WORK_DIR);
  std::filesystem::create_directories(dir);
  save_forest(f, dir / "forest.bin");
  const auto g = load_forest(dir / "forest.bin");
  CHECK(g == f);
  for (const auto& x : d.X) CHECK(predict(g, x).probability == predict(f, x).probability);
  std::ostringstream os;
  dump_forest(f, os);
  CHECK(os.str().rfind("forest trees=5", 0) == 0);
  CHECK(os.str().find("tree 4") != std::string::npos);
  CHECK_THROWS(load_forest(dir / "absent.bin"));
}

TEST_CASE("evaluation metrics") {
  // tp 3, fp 1, fn 2, tn 2
  const auto m = evaluate({1, 1, 1, 1, 0, 0, 0, 0}, {1, 1, 1, 0, 1, 1, 0, 0});
  CHECK(m.tp == 3);
  CHECK(m.fp == 1);
  CHECK(m.fn == 2);
  CHECK(m.tn == 2);
  CHECK(m.precision == doctest::Approx(0.75));
  CHECK(m.recall == doctest::Approx(0.6));
  CHECK(m.f1 == doctest::Approx(2 * 0.75 * 0.6 / 1.35));
  const auto none = evaluate({0, 0}, {0, 0});
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK_THROWS_AS(evaluate({1}, {1, 0}), std::invalid_argument);
}

TEST_CASE("calibration bins") {
  const auto c = calibration({0.05, 0.15, 0.12, 0.95, 1.0}, {0, 1, 0, 1, 1}, 10);
  REQUIRE(c.size() == 3);
  CHECK(c[0].count == 1);
  CHECK(c[1].mean_predicted == doctest::Approx(0.135));
  CHECK(c[1].observed == doctest::Approx(0.5));
  CHECK(c[2].count == 2);
  CHECK(c[2].observed == 1.0);
  CHECK(calibration({}, {}).empty());
  CHECK_THROWS_AS(calibration({1.5}, {1}), std::invalid_argument);
}

TEST_CASE("rule baseline thresholds the similarity shift") {
  const EmbeddingModel m({"a", "b", "c"}, 2, {1, 0, 0, 1, 1, 1}, std::vector<double>(6, 0.0));
  PairChange pc;
  pc.s_cmt = TokenSequence{{"a"}, Origin::comment};
  pc.s_code = TokenSequence{{"a"}, Origin::code};
  pc.s_code_new = TokenSequence{{"a"}, Origin::code};
  CHECK(similarity_shift(pc, m) == 0.0);
  CHECK(rule_baseline(pc, m) == 0);
  pc.s_code_new = TokenSequence{{"c"}, Origin::code};
  // 1 - cos 45 = 0.2929
  CHECK(similarity_shift(pc, m) == doctest::Approx(1 - std::sqrt(0.5)));
  CHECK(rule_baseline(pc, m, 0.05) == 1);
  CHECK(rule_baseline(pc, m, 0.3) == 0);
}

TEST_CASE("hyperparameter grid and cross-validated search") {
  const auto g = default_grid();
  CHECK(g.size() == 864);
  std::set<std::tuple<int, int, int, int, int, int>> distinct;
  for (const auto& hp : g)
    distinct.insert({hp.n_trees, int(hp.criterion), hp.max_depth.value_or(-1), hp.min_samples_split,
                     hp.min_samples_leaf, int(hp.max_features)});
  CHECK(distinct.size() == 864);

  const auto d = planted(120, 4, 1, 5);
  std::vector<Hyperparams> grid(2, small(5));
  grid[0].max_depth = 1;
  grid[0].max_features = MaxFeatures::all;
  grid[1].max_depth = 1;
  grid[1].max_features = MaxFeatures::all;
  grid[1].min_samples_leaf = 100;
  const auto r = grid_search(d.X, d.y, grid, 4, 3);
  REQUIRE(r.size() == 2);
  CHECK(r[0].hp == grid[0]);
  CHECK(r[0].mean_f1 >= r[1].mean_f1);
  CHECK(grid_search(d.X, d.y, grid, 4, 3)[0].mean_f1 == r[0].mean_f1);
  CHECK_THROWS_AS(grid_search(d.X, d.y, grid, 1), std::invalid_argument);
}
