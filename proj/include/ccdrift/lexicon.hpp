#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ccdrift {

enum class Origin { code, comment };

/// Lowercase, stop-word-free, stemmed words.
struct TokenSequence {
  std::vector<std::string> tokens;
  Origin origin = Origin::comment;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }
  bool operator==(const TokenSequence&) const = default;
};

enum class Pos : std::size_t {
  noun,
  verb,
  adjective,
  adverb,
  pronoun,
  preposition,
  conjunction,
  determiner,
  numeral,
  other,
};

inline constexpr std::size_t kPosCount = 10;
std::string_view pos_name(Pos p);

struct PosDistribution {
  std::array<double, kPosCount> proportions{};

  double operator[](Pos p) const { return proportions[static_cast<std::size_t>(p)]; }
};

/// Splits on camelCase humps, underscores and digit/letter boundaries.
/// Acronym runs stay together ("HTTPServer" -> "HTTP", "Server").
std::vector<std::string> split_identifier(std::string_view token);

/// Single pass of the original Porter algorithm over a lowercase word.
std::string porter_stem(std::string_view word);

bool is_stop_word(std::string_view word);
const std::vector<std::string_view>& stop_words();

/// Word-splits, lowercases, drops stop words and stems. Code text is split
/// into identifiers first; comment text splits on whitespace and punctuation.
/// Stemming is iterated to a fixed point so that normalize is idempotent.
TokenSequence normalize(std::string_view text, Origin origin);

/// Most-frequent-tag dictionary with suffix fallback; unknown words are nouns.
class PosTagger {
 public:
  /// The embedded English lexicon.
  static const PosTagger& builtin();

  /// Reads `word<TAB>tag` lines. Tags use the names from pos_name().
  static PosTagger from_file(const std::filesystem::path& path);
  static PosTagger from_tsv(std::string_view tsv);

  Pos tag(std::string_view word) const;

 private:
  void insert(std::string word, Pos p);
  std::unordered_map<std::string, Pos> lexicon_;
};

PosDistribution pos_distribution(const TokenSequence& words,
                                 const PosTagger& tagger = PosTagger::builtin());

/// Elementwise absolute difference.
std::array<double, kPosCount> pos_distance(const PosDistribution& old_dist,
                                           const PosDistribution& new_dist);

namespace detail {
std::string_view builtin_lexicon_tsv();
}

}  // namespace ccdrift
