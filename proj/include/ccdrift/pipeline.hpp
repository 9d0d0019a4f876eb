#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccdrift/corpus.hpp"
#include "ccdrift/distiller.hpp"
#include "ccdrift/embed.hpp"
#include "ccdrift/features.hpp"
#include "ccdrift/forest.hpp"
#include "ccdrift/linker.hpp"
#include "ccdrift/metrics.hpp"

namespace ccdrift {

struct MineConfig {
  std::vector<std::string> extensions{".java"};
  // keep pairs whose comment changed while the code did not
  bool include_comment_only = true;
  std::string grammar = "curly";
  std::optional<std::string> range;
  AlignConfig align;
  DiffConfig diff;
};

struct MineStats {
  std::size_t commits = 0;
  std::size_t skipped_commits = 0;
  std::size_t files = 0;
  std::size_t unparsable_files = 0;
  std::size_t method_positive = 0;
  std::size_t method_negative = 0;
  std::size_t block_positive = 0;
  std::size_t block_negative = 0;

  std::size_t total() const { return method_positive + method_negative + block_positive + block_negative; }
};

struct MineResult {
  std::vector<DatasetRecord> records;
  MineStats stats;
};

/// Labeled pair changes between two versions of one file. Throws
/// ParseError when either side does not parse.
std::vector<PairChange> changes_for_file(std::string_view old_source, std::string_view new_source,
                                         const MineConfig& config = {});

MineResult mine_repository(const std::filesystem::path& repo, const MineConfig& config = {});

/// Counts by pair kind and label.
void print_mine_table(const MineStats& stats, std::ostream& os);

struct TrainConfig {
  double split = 0.7;
  std::uint64_t seed = 1;
  SkipgramConfig skipgram;
  Hyperparams forest;
  double correlation_threshold = 0.8;
  double baseline_threshold = 0.05;
  FeatureConfig features;
  bool grid_search = false;
  int folds = 10;

  void validate() const;
};

struct ModelBundle {
  std::optional<EmbeddingModel> embedding;
  Forest forest;
  Standardization standardization;
  std::vector<std::string> feature_names;
  Metrics metrics;
  Metrics baseline;
  FeatureTable train;  // raw features
  FeatureTable test;
  TrainConfig config;
};

/// Seeded record-level split, embedding on training documents, features
/// standardized and filtered on training statistics, forest, held-out
/// metrics. Throws std::invalid_argument for single-class data.
ModelBundle train_from_records(const std::vector<DatasetRecord>& records, const TrainConfig& config = {});

/// Same from a raw feature table; the bundle carries no embedding.
ModelBundle train_from_table(const FeatureTable& table, const TrainConfig& config = {});

/// Forest and preprocessing fitted on `table` while the embedding is kept
/// for featurizing new changes.
ModelBundle train_with_embedding(const FeatureTable& table, EmbeddingModel embedding,
                                 const TrainConfig& config = {});

/// Training documents for the embedding: both sides of every pair.
std::vector<TokenSequence> embedding_corpus(const std::vector<DatasetRecord>& records, std::uint64_t seed);

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& dir);
ModelBundle load_bundle(const std::filesystem::path& dir);

void print_metrics(const ModelBundle& bundle, std::ostream& os);

struct Contribution {
  std::string feature;
  double value = 0.0;  // importance times standardized value
};

struct Detection {
  std::string project;
  std::string commit;
  std::string file;
  std::string comment_excerpt;
  LineSpan comment_span;
  double probability = 0.0;
  int label = 0;
  std::vector<Contribution> top_features;
};

struct DetectionReport {
  std::vector<Detection> entries;  // flagged only, by descending probability
  std::size_t examined = 0;
};

/// Throws std::invalid_argument when the bundle has no embedding or its
/// feature layout differs from the extractor's.
DetectionReport detect(const ModelBundle& bundle, const std::filesystem::path& repo,
                       const MineConfig& config = {});
DetectionReport detect_changes(const ModelBundle& bundle, const std::vector<DatasetRecord>& records);

void print_report(const DetectionReport& report, std::ostream& os);

struct ImportanceEntry {
  std::string feature;
  double score = 0.0;
};

struct AnalysisReport {
  std::vector<ImportanceEntry> ranking;  // descending
  double full_f1 = 0.0;
  double top_f1 = 0.0;
  std::size_t top_k = 15;
  std::vector<CalibrationPoint> calibration;
};

/// Importance ranking, a retrain on the top-k features, calibration of the
/// held-out predictions.
AnalysisReport analyze(const ModelBundle& bundle, std::size_t top_k = 15, int bins = 10);

/// importance.tsv, subset.tsv and calibration.tsv under `dir`.
void write_analysis(const AnalysisReport& report, const std::filesystem::path& dir);

}  // namespace ccdrift
