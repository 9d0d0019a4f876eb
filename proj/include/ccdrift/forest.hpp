#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ccdrift {

enum class Criterion { gini, entropy };
enum class MaxFeatures { sqrt, log2, all };

struct Hyperparams {
  int n_trees = 200;
  Criterion criterion = Criterion::gini;
  std::optional<int> max_depth;  // unbounded when empty
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  MaxFeatures max_features = MaxFeatures::sqrt;
  std::uint64_t seed = 1;
  bool bootstrap = true;
  int threads = 0;  // 0: hardware concurrency; output does not depend on it

  void validate() const;
  // threads is a runtime setting and not part of the model
  bool operator==(const Hyperparams& o) const {
    return n_trees == o.n_trees && criterion == o.criterion && max_depth == o.max_depth &&
           min_samples_split == o.min_samples_split && min_samples_leaf == o.min_samples_leaf &&
           max_features == o.max_features && seed == o.seed && bootstrap == o.bootstrap;
  }
};

/// 1 - p0^2 - p1^2; 0 for an empty set.
double gini(std::size_t negatives, std::size_t positives);
double gini(const std::vector<int>& labels);
double entropy(std::size_t negatives, std::size_t positives);
/// Impurity decrease of splitting parent into left and right.
double gain(const std::vector<int>& parent, const std::vector<int>& left, const std::vector<int>& right);

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;  // left iff x[feature] <= threshold
  int left = -1;
  int right = -1;
  double p0 = 0.0;
  double p1 = 0.0;
  std::uint64_t samples = 0;
  double impurity = 0.0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root

  double predict_proba(const std::vector<double>& x) const;
  bool operator==(const DecisionTree&) const = default;
};

struct Forest {
  std::vector<DecisionTree> trees;
  std::vector<std::string> feature_names;
  std::vector<bool> kept_mask;
  Hyperparams hp;
  std::uint64_t n_train = 0;

  std::size_t n_features() const { return kept_mask.size(); }
  bool operator==(const Forest&) const = default;
};

/// Trees split only on features whose mask bit is set; an empty mask keeps
/// all. Throws std::invalid_argument for single-class or malformed data.
Forest train_forest(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                    const Hyperparams& hp = {}, std::vector<bool> kept_mask = {},
                    std::vector<std::string> feature_names = {});

struct Prediction {
  double probability = 0.0;
  int label = 0;
};

/// Mean positive-leaf probability over trees; label 1 iff >= 0.5.
Prediction predict(const Forest& forest, const std::vector<double>& x);

/// Weighted gini decrease per feature summed over nodes and trees,
/// normalized to sum 1.
std::vector<double> feature_importance(const Forest& forest);

void save_forest(const Forest& forest, const std::filesystem::path& path);
Forest load_forest(const std::filesystem::path& path);
void dump_forest(const Forest& forest, std::ostream& os);

struct GridPoint {
  Hyperparams hp;
  double mean_f1 = 0.0;
};

/// The full hyperparameter grid searched for the forest.
std::vector<Hyperparams> default_grid(const Hyperparams& base = {});

/// k-fold cross-validated F1 per grid point, best first (ties keep grid
/// order).
std::vector<GridPoint> grid_search(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                                   const std::vector<Hyperparams>& grid, int folds = 10,
                                   std::uint64_t seed = 1, std::vector<bool> kept_mask = {});

}  // namespace ccdrift
