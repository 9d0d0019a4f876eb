#include "ccdrift/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "binio.hpp"
#include "ccdrift/metrics.hpp"
#include "ccdrift/random.hpp"

namespace ccdrift {
namespace {

const std::string kMagic = "CCDRF001";
constexpr double kMinGain = 1e-12;

double impurity(Criterion c, double n0, double n1) {
  const double n = n0 + n1;
  if (n <= 0) return 0.0;
  const double p0 = n0 / n;
  const double p1 = n1 / n;
  if (c == Criterion::gini) return 1.0 - p0 * p0 - p1 * p1;
  double h = 0;
  if (p0 > 0) h -= p0 * std::log2(p0);
  if (p1 > 0) h -= p1 * std::log2(p1);
  return h;
}

std::size_t subset_size(MaxFeatures m, std::size_t f) {
  if (f == 0) return 0;
  switch (m) {
    case MaxFeatures::sqrt:
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(f)))));
    case MaxFeatures::log2:
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(f)))));
    case MaxFeatures::all:
      return f;
  }
  return f;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& X, const std::vector<int>& y, const Hyperparams& hp,
              const std::vector<std::size_t>& features, std::uint64_t seed)
      : X_(X), y_(y), hp_(hp), features_(features), rng_(seed) {}

  DecisionTree build() {
    std::vector<std::size_t> rows;
    const std::size_t n = X_.size();
    rows.reserve(n);
    if (hp_.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) rows.push_back(uniform_index(rng_, n));
      std::sort(rows.begin(), rows.end());
    } else {
      for (std::size_t i = 0; i < n; ++i) rows.push_back(i);
    }
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t>& rows, int depth) {
    std::size_t n1 = 0;
    for (auto r : rows) n1 += y_[r] == 1;
    const std::size_t n0 = rows.size() - n1;
    const int id = static_cast<int>(tree_.nodes.size());
    TreeNode node;
    node.samples = rows.size();
    node.p1 = rows.empty() ? 0.0 : static_cast<double>(n1) / static_cast<double>(rows.size());
    node.p0 = 1.0 - node.p1;
    node.impurity = impurity(hp_.criterion, static_cast<double>(n0), static_cast<double>(n1));
    tree_.nodes.push_back(node);

    const bool stop = (hp_.max_depth && depth >= *hp_.max_depth) ||
                      rows.size() < static_cast<std::size_t>(hp_.min_samples_split) || n0 == 0 || n1 == 0;
    if (stop) return id;
    const Split s = best_split(rows, n0, n1, node.impurity);
    if (s.feature < 0 || s.gain <= kMinGain) return id;

    std::vector<std::size_t> left, right;
    for (auto r : rows) (X_[r][s.feature] <= s.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    tree_.nodes[id].feature = s.feature;
    tree_.nodes[id].threshold = s.threshold;
    const int l = grow(left, depth + 1);
    tree_.nodes[id].left = l;
    const int r = grow(right, depth + 1);
    tree_.nodes[id].right = r;
    return id;
  }

  Split best_split(const std::vector<std::size_t>& rows, std::size_t n0, std::size_t n1, double parent) {
    // random order; constant features do not use up the subset budget
    std::vector<std::size_t> order = features_;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng_, i)]);
    const std::size_t want = subset_size(hp_.max_features, features_.size());
    std::vector<std::pair<double, int>> vals(rows.size());
    Split best;
    std::size_t visited = 0;
    for (std::size_t f : order) {
      if (visited >= want) break;
      for (std::size_t k = 0; k < rows.size(); ++k) vals[k] = {X_[rows[k]][f], y_[rows[k]]};
      std::sort(vals.begin(), vals.end());
      if (vals.front().first == vals.back().first) continue;
      ++visited;
      const Split s = best_threshold(vals, n0, n1, parent, static_cast<int>(f));
      if (s.feature < 0) continue;
      if (best.feature < 0 || s.gain > best.gain || (s.gain == best.gain && s.feature < best.feature)) best = s;
    }
    return best;
  }

  Split best_threshold(const std::vector<std::pair<double, int>>& vals, std::size_t n0, std::size_t n1,
                       double parent, int feature) const {
    Split best;
    const double n = static_cast<double>(vals.size());
    const std::size_t leaf = static_cast<std::size_t>(hp_.min_samples_leaf);
    double l0 = 0, l1 = 0;
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
      (vals[k].second == 1 ? l1 : l0) += 1;
      if (vals[k].first == vals[k + 1].first) continue;
      const std::size_t nl = k + 1;
      if (nl < leaf || vals.size() - nl < leaf) continue;
      const double r0 = static_cast<double>(n0) - l0;
      const double r1 = static_cast<double>(n1) - l1;
      const double g = parent - ((l0 + l1) / n) * impurity(hp_.criterion, l0, l1) -
                       ((r0 + r1) / n) * impurity(hp_.criterion, r0, r1);
      if (best.feature < 0 || g > best.gain) {
        best.feature = feature;
        best.gain = g;
        best.threshold = vals[k].first + (vals[k + 1].first - vals[k].first) / 2.0;
        // a midpoint that rounds onto the upper value would misroute it
        if (!(best.threshold < vals[k + 1].first)) best.threshold = vals[k].first;
      }
    }
    return best;
  }

  const std::vector<std::vector<double>>& X_;
  const std::vector<int>& y_;
  const Hyperparams& hp_;
  const std::vector<std::size_t>& features_;
  Rng rng_;
  DecisionTree tree_;
};

void put_hp(std::ostream& os, const Hyperparams& hp) {
  detail::put_i64(os, hp.n_trees);
  detail::put_i64(os, static_cast<int>(hp.criterion));
  detail::put_i64(os, hp.max_depth.value_or(-1));
  detail::put_i64(os, hp.min_samples_split);
  detail::put_i64(os, hp.min_samples_leaf);
  detail::put_i64(os, static_cast<int>(hp.max_features));
  detail::put_u64(os, hp.seed);
  detail::put_i64(os, hp.bootstrap);
}

Hyperparams get_hp(std::istream& is) {
  Hyperparams hp;
  hp.n_trees = static_cast<int>(detail::get_i64(is));
  hp.criterion = static_cast<Criterion>(detail::get_i64(is));
  const auto depth = detail::get_i64(is);
  if (depth >= 0) hp.max_depth = static_cast<int>(depth);
  hp.min_samples_split = static_cast<int>(detail::get_i64(is));
  hp.min_samples_leaf = static_cast<int>(detail::get_i64(is));
  hp.max_features = static_cast<MaxFeatures>(detail::get_i64(is));
  hp.seed = detail::get_u64(is);
  hp.bootstrap = detail::get_i64(is) != 0;
  return hp;
}

std::string_view criterion_name(Criterion c) { return c == Criterion::gini ? "gini" : "entropy"; }

std::string_view max_features_name(MaxFeatures m) {
  switch (m) {
    case MaxFeatures::sqrt:
      return "sqrt";
    case MaxFeatures::log2:
      return "log2";
    case MaxFeatures::all:
      return "all";
  }
  return "?";
}

}  // namespace

void Hyperparams::validate() const {
  if (n_trees <= 0) throw std::invalid_argument("n_trees must be positive");
  if (max_depth && *max_depth < 0) throw std::invalid_argument("max_depth must be non-negative");
  if (min_samples_split < 2) throw std::invalid_argument("min_samples_split must be at least 2");
  if (min_samples_leaf < 1) throw std::invalid_argument("min_samples_leaf must be at least 1");
}

double gini(std::size_t negatives, std::size_t positives) {
  return impurity(Criterion::gini, static_cast<double>(negatives), static_cast<double>(positives));
}

double gini(const std::vector<int>& labels) {
  const auto p = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  return gini(labels.size() - p, p);
}

double entropy(std::size_t negatives, std::size_t positives) {
  return impurity(Criterion::entropy, static_cast<double>(negatives), static_cast<double>(positives));
}

double gain(const std::vector<int>& parent, const std::vector<int>& left, const std::vector<int>& right) {
  if (parent.empty()) return 0.0;
  const double n = static_cast<double>(parent.size());
  return gini(parent) - (static_cast<double>(left.size()) / n) * gini(left) -
         (static_cast<double>(right.size()) / n) * gini(right);
}

double DecisionTree::predict_proba(const std::vector<double>& x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].p1;
}

Forest train_forest(const std::vector<std::vector<double>>& X, const std::vector<int>& y, const Hyperparams& hp,
                    std::vector<bool> kept_mask, std::vector<std::string> feature_names) {
  hp.validate();
  if (X.size() != y.size()) throw std::invalid_argument("feature rows and labels differ in length");
  if (X.size() < static_cast<std::size_t>(hp.min_samples_split))
    throw std::invalid_argument("too few training rows");
  const std::size_t width = X.front().size();
  for (const auto& r : X)
    if (r.size() != width) throw std::invalid_argument("ragged feature matrix");
  for (int v : y)
    if (v != 0 && v != 1) throw std::invalid_argument("labels must be 0 or 1");
  const auto pos = std::count(y.begin(), y.end(), 1);
  if (pos == 0 || static_cast<std::size_t>(pos) == y.size())
    throw std::invalid_argument("training data has a single class");
  if (kept_mask.empty()) kept_mask.assign(width, true);
  if (kept_mask.size() != width) throw std::invalid_argument("kept mask width does not match features");
  if (!feature_names.empty() && feature_names.size() != width)
    throw std::invalid_argument("feature name count does not match features");

  std::vector<std::size_t> features;
  for (std::size_t j = 0; j < width; ++j)
    if (kept_mask[j]) features.push_back(j);
  if (features.empty()) throw std::invalid_argument("no features kept");

  Forest f;
  f.hp = hp;
  f.kept_mask = std::move(kept_mask);
  f.feature_names = std::move(feature_names);
  f.n_train = X.size();
  f.trees.resize(static_cast<std::size_t>(hp.n_trees));

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hp.threads > 0 ? hp.threads : hw, f.trees.size());
  auto work = [&](std::size_t w) {
    for (std::size_t t = w; t < f.trees.size(); t += workers)
      f.trees[t] = TreeBuilder(X, y, hp, features, derive_seed(hp.seed, t)).build();
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  return f;
}

Prediction predict(const Forest& forest, const std::vector<double>& x) {
  if (x.size() != forest.n_features())
    throw std::invalid_argument("feature vector has " + std::to_string(x.size()) + " values, model expects " +
                                std::to_string(forest.n_features()));
  if (forest.trees.empty()) throw std::invalid_argument("empty forest");
  double p = 0;
  for (const auto& t : forest.trees) p += t.predict_proba(x);
  p /= static_cast<double>(forest.trees.size());
  return {p, p >= 0.5 ? 1 : 0};
}

std::vector<double> feature_importance(const Forest& forest) {
  std::vector<double> imp(forest.n_features(), 0.0);
  for (const auto& t : forest.trees) {
    if (t.nodes.empty()) continue;
    const double root = static_cast<double>(t.nodes.front().samples);
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) continue;
      const auto& l = t.nodes[static_cast<std::size_t>(n.left)];
      const auto& r = t.nodes[static_cast<std::size_t>(n.right)];
      const double dec = (static_cast<double>(n.samples) * n.impurity - static_cast<double>(l.samples) * l.impurity -
                          static_cast<double>(r.samples) * r.impurity) /
                         root;
      imp[static_cast<std::size_t>(n.feature)] += dec;
    }
  }
  double total = 0;
  for (double v : imp) total += v;
  if (total > 0)
    for (double& v : imp) v /= total;
  return imp;
}

void save_forest(const Forest& forest, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  detail::put_u64(os, 1);  // layout version
  put_hp(os, forest.hp);
  detail::put_u64(os, forest.n_train);
  detail::put_u64(os, forest.kept_mask.size());
  for (bool b : forest.kept_mask) detail::put_u64(os, b);
  detail::put_u64(os, forest.feature_names.size());
  for (const auto& n : forest.feature_names) detail::put_str(os, n);
  detail::put_u64(os, forest.trees.size());
  for (const auto& t : forest.trees) {
    detail::put_u64(os, t.nodes.size());
    for (const auto& n : t.nodes) {
      detail::put_i64(os, n.feature);
      detail::put_f64(os, n.threshold);
      detail::put_i64(os, n.left);
      detail::put_i64(os, n.right);
      detail::put_f64(os, n.p0);
      detail::put_f64(os, n.p1);
      detail::put_u64(os, n.samples);
      detail::put_f64(os, n.impurity);
    }
  }
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

Forest load_forest(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  detail::expect_magic(is, kMagic);
  if (detail::get_u64(is) != 1) throw std::runtime_error("unsupported forest layout version");
  Forest f;
  f.hp = get_hp(is);
  f.n_train = detail::get_u64(is);
  const auto width = detail::get_u64(is);
  for (std::uint64_t i = 0; i < width; ++i) f.kept_mask.push_back(detail::get_u64(is) != 0);
  const auto names = detail::get_u64(is);
  for (std::uint64_t i = 0; i < names; ++i) f.feature_names.push_back(detail::get_str(is));
  const auto trees = detail::get_u64(is);
  for (std::uint64_t t = 0; t < trees; ++t) {
    DecisionTree tree;
    const auto count = detail::get_u64(is);
    for (std::uint64_t k = 0; k < count; ++k) {
      TreeNode n;
      n.feature = static_cast<int>(detail::get_i64(is));
      n.threshold = detail::get_f64(is);
      n.left = static_cast<int>(detail::get_i64(is));
      n.right = static_cast<int>(detail::get_i64(is));
      n.p0 = detail::get_f64(is);
      n.p1 = detail::get_f64(is);
      n.samples = detail::get_u64(is);
      n.impurity = detail::get_f64(is);
      const auto lim = static_cast<int>(count);
      if (n.feature >= static_cast<int>(width) || n.left >= lim || n.right >= lim ||
          (n.feature >= 0 && (n.left < 0 || n.right < 0)))
        throw std::runtime_error("corrupt forest node");
      tree.nodes.push_back(n);
    }
    if (tree.nodes.empty()) throw std::runtime_error("corrupt forest: empty tree");
    f.trees.push_back(std::move(tree));
  }
  return f;
}

void dump_forest(const Forest& forest, std::ostream& os) {
  const auto& hp = forest.hp;
  os << "forest trees=" << forest.trees.size() << " criterion=" << criterion_name(hp.criterion)
     << " max_depth=" << (hp.max_depth ? std::to_string(*hp.max_depth) : "none")
     << " min_samples_split=" << hp.min_samples_split << " min_samples_leaf=" << hp.min_samples_leaf
     << " max_features=" << max_features_name(hp.max_features) << " seed=" << hp.seed << '\n';
  auto name = [&](int f) {
    const auto i = static_cast<std::size_t>(f);
    return i < forest.feature_names.size() ? forest.feature_names[i] : "f" + std::to_string(f);
  };
  os << std::setprecision(6);
  for (std::size_t t = 0; t < forest.trees.size(); ++t) {
    os << "tree " << t << '\n';
    const auto& nodes = forest.trees[t].nodes;
    std::vector<std::pair<int, int>> stack{{0, 1}};
    while (!stack.empty()) {
      const auto [id, depth] = stack.back();
      stack.pop_back();
      const auto& n = nodes[static_cast<std::size_t>(id)];
      os << std::string(static_cast<std::size_t>(depth) * 2, ' ');
      if (n.is_leaf()) {
        os << "leaf p1=" << n.p1 << " n=" << n.samples << '\n';
      } else {
        os << name(n.feature) << " <= " << n.threshold << " n=" << n.samples << '\n';
        stack.push_back({n.right, depth + 1});
        stack.push_back({n.left, depth + 1});
      }
    }
  }
}

std::vector<Hyperparams> default_grid(const Hyperparams& base) {
  std::vector<Hyperparams> out;
  for (int n : {50, 100, 200, 300})
    for (auto c : {Criterion::gini, Criterion::entropy})
      for (std::optional<int> d : {std::optional<int>{}, std::optional<int>{5}, std::optional<int>{10},
                                   std::optional<int>{20}})
        for (int split : {2, 5, 10})
          for (int leaf : {1, 2, 4})
            for (auto mf : {MaxFeatures::sqrt, MaxFeatures::log2, MaxFeatures::all}) {
              Hyperparams hp = base;
              hp.n_trees = n;
              hp.criterion = c;
              hp.max_depth = d;
              hp.min_samples_split = split;
              hp.min_samples_leaf = leaf;
              hp.max_features = mf;
              out.push_back(hp);
            }
  return out;
}

std::vector<GridPoint> grid_search(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                                   const std::vector<Hyperparams>& grid, int folds, std::uint64_t seed,
                                   std::vector<bool> kept_mask) {
  if (folds < 2) throw std::invalid_argument("need at least two folds");
  if (X.size() < static_cast<std::size_t>(folds)) throw std::invalid_argument("fewer rows than folds");
  std::vector<std::size_t> order(X.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(seed, 0x6772));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);

  std::vector<GridPoint> out;
  for (const auto& hp : grid) {
    double total = 0;
    for (int k = 0; k < folds; ++k) {
      std::vector<std::vector<double>> xtr, xte;
      std::vector<int> ytr, yte;
      for (std::size_t i = 0; i < order.size(); ++i) {
        const bool test = static_cast<int>(i % static_cast<std::size_t>(folds)) == k;
        (test ? xte : xtr).push_back(X[order[i]]);
        (test ? yte : ytr).push_back(y[order[i]]);
      }
      std::vector<int> pred;
      try {
        const auto f = train_forest(xtr, ytr, hp, kept_mask);
        for (const auto& x : xte) pred.push_back(predict(f, x).label);
      } catch (const std::invalid_argument&) {
        pred.assign(yte.size(), 0);  // a single-class fold
      }
      total += evaluate(pred, yte).f1;
    }
    out.push_back({hp, total / folds});
  }
  std::stable_sort(out.begin(), out.end(), [](const GridPoint& a, const GridPoint& b) { return a.mean_f1 > b.mean_f1; });
  return out;
}

}  // namespace ccdrift
