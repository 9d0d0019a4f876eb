#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ccdrift/distiller.hpp"
#include "ccdrift/embed.hpp"
#include "ccdrift/lexicon.hpp"
#include "ccdrift/linker.hpp"
#include "ccdrift/refactor.hpp"

namespace ccdrift {

struct PairChange {
  CodeCommentPair old_pair;
  CodeCommentPair new_pair;
  std::vector<ChangeOp> ops;
  DeclChange decl;
  RefactoringFlags refactorings;
  int label = 0;
  TokenSequence s_cmt;       // old comment
  TokenSequence s_code;      // old code
  TokenSequence s_code_new;  // new code
  TokenSequence s_smt;       // old side of changed statements
  TokenSequence s_smt_new;   // new side of changed statements
};

/// Fills the five token sequences from the pairs and ops.
void populate_tokens(PairChange& pc);

enum class FeatureType { binary, discrete, continuous };
enum class FeatureGroup { code, comment, relation };

inline constexpr std::size_t kFeatureCount = 71;

const std::vector<std::string>& feature_names();
const std::vector<FeatureType>& feature_types();
const std::vector<FeatureGroup>& feature_groups();
std::optional<std::size_t> feature_index(std::string_view name);
/// True for the continuous features, the ones standardization touches.
std::vector<bool> continuous_mask();

struct FeatureConfig {
  bool binarize_counts = false;
  // read "contains return" from a @return tag in the comment instead of
  // from RETURN statements in the code
  bool return_from_comment_tag = false;
};

/// 53 values in feature_names() order.
std::vector<double> code_features(const PairChange& pc, const FeatureConfig& config = {});
/// 14 values.
std::vector<double> comment_features(std::string_view comment, const PosTagger& tagger = PosTagger::builtin());
/// 4 values.
std::vector<double> relation_features(const PairChange& pc, const EmbeddingModel& model);

/// All 71 values.
std::vector<double> extract_features(const PairChange& pc, const EmbeddingModel& model,
                                     const FeatureConfig& config = {});

using Matrix = std::vector<std::vector<double>>;

/// Column statistics for (x - mean) / std on the masked columns. Population
/// std; a constant column maps to 0.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> std;
  std::vector<bool> applied;

  std::vector<double> apply(const std::vector<double>& row) const;
  Matrix apply(const Matrix& m) const;
};

/// Throws std::invalid_argument for fewer than two rows.
Standardization fit_standardization(const Matrix& m, const std::vector<bool>& continuous);
Matrix standardize(const Matrix& m, const std::vector<bool>& continuous);

double pearson(const Matrix& m, std::size_t a, std::size_t b);

/// Indices surviving a greedy pass that drops the later column of every
/// pair with |r| >= threshold. Constant columns are kept. Needs >= 3 rows.
std::vector<std::size_t> filter_correlated(const Matrix& m, double threshold = 0.8);

Matrix select_columns(const Matrix& m, const std::vector<std::size_t>& keep);

/// Tab-separated, header of names; a leading "label" column when labels
/// are given.
void write_feature_matrix(const std::filesystem::path& path, const std::vector<std::string>& names,
                          const Matrix& m, const std::vector<int>* labels = nullptr);

struct FeatureTable {
  std::vector<std::string> names;
  Matrix rows;
  std::vector<int> labels;  // empty without a label column
};

FeatureTable read_feature_matrix(const std::filesystem::path& path);

}  // namespace ccdrift
