#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccdrift/lexicon.hpp"
#include "ccdrift/linker.hpp"

namespace ccdrift {

struct SkipgramConfig {
  int window_radius = 2;  // window of 2k+1 words
  int embedding_dim = 100;
  int negative_samples = 5;
  int epochs = 5;
  double learning_rate = 0.025;  // decays linearly to 1e-4 of itself
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument
};

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(std::vector<std::string> vocab, int dim, std::vector<double> input,
                 std::vector<double> output, SkipgramConfig config = {});

  int dim() const { return dim_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocab_; }
  const SkipgramConfig& config() const { return config_; }
  std::optional<std::size_t> index_of(const std::string& word) const;
  bool contains(const std::string& word) const { return index_of(word).has_value(); }

  const double* input(std::size_t i) const { return input_.data() + i * dim_; }
  const double* output(std::size_t i) const { return output_.data() + i * dim_; }
  double* input(std::size_t i) { return input_.data() + i * dim_; }
  double* output(std::size_t i) { return output_.data() + i * dim_; }

  /// Average negative-sampling objective per training pair, one per epoch.
  const std::vector<double>& epoch_objective() const { return epoch_objective_; }
  void set_epoch_objective(std::vector<double> v) { epoch_objective_ = std::move(v); }

  void save(const std::filesystem::path& path) const;
  static EmbeddingModel load(const std::filesystem::path& path);

  bool operator==(const EmbeddingModel& o) const;

 private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> index_;
  int dim_ = 0;
  std::vector<double> input_;
  std::vector<double> output_;
  SkipgramConfig config_;
  std::vector<double> epoch_objective_;
};

struct PairDocuments {
  TokenSequence comment_doc;
  TokenSequence code_doc;
  bool degenerate = false;  // one side normalized to nothing
};

/// Each comment word w becomes [w, c1, c2] with c1, c2 drawn from the code
/// words (distinct when the code has two or more distinct words); the code
/// document is built symmetrically from comment words.
PairDocuments build_documents(const TokenSequence& comment, const TokenSequence& code,
                              std::uint64_t seed);
PairDocuments build_documents(const CodeCommentPair& pair, std::uint64_t seed);

/// Throws std::invalid_argument on an empty corpus.
EmbeddingModel train_skipgram(const std::vector<TokenSequence>& corpus, const SkipgramConfig& config = {});

/// log s(u'.v) + sum_n log s(-u'_n.v) for one center vector v, context
/// output vector u' and negative output vectors u'_n.
double ns_objective(const std::vector<double>& center, const std::vector<double>& context,
                    const std::vector<std::vector<double>>& negatives);

struct NsGradient {
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};

/// Analytic gradient of ns_objective.
NsGradient ns_gradient(const std::vector<double>& center, const std::vector<double>& context,
                       const std::vector<std::vector<double>>& negatives);

/// Cosine of the input vectors; 0 when either word is unknown.
double sim_ww(const std::string& w1, const std::string& w2, const EmbeddingModel& model);
/// Best sim_ww between w and any word of s; 0 for empty s.
double sim_ws(const std::string& w, const std::vector<std::string>& s, const EmbeddingModel& model);
/// Mean of the two directed average word-to-sentence similarities; 0 if
/// either side is empty.
double sim_ss(const std::vector<std::string>& s1, const std::vector<std::string>& s2,
              const EmbeddingModel& model);
double sim_ss(const TokenSequence& s1, const TokenSequence& s2, const EmbeddingModel& model);

}  // namespace ccdrift
