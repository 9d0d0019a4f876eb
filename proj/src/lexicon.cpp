#include "ccdrift/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace ccdrift {
namespace {

constexpr std::array<std::string_view, kPosCount> kPosNames = {
    "noun",        "verb",        "adjective",  "adverb",  "pronoun",
    "preposition", "conjunction", "determiner", "numeral", "other",
};

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool is_wide(char c) { return static_cast<unsigned char>(c) >= 0x80; }

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Iterated to a fixed point; a single Porter pass is not idempotent
// ("agreed" -> "agre" -> "agr").
std::string stem_closure(std::string word) {
  for (int i = 0; i < 8; ++i) {
    std::string next = porter_stem(word);
    if (next == word) break;
    word = std::move(next);
  }
  return word;
}

const std::unordered_set<std::string_view>& stop_set() {
  static const std::unordered_set<std::string_view> set(stop_words().begin(),
                                                        stop_words().end());
  return set;
}

Pos parse_pos(std::string_view name) {
  for (std::size_t i = 0; i < kPosCount; ++i)
    if (kPosNames[i] == name) return static_cast<Pos>(i);
  throw std::invalid_argument("unknown part-of-speech tag: " + std::string(name));
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() + 1 && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string_view pos_name(Pos p) { return kPosNames[static_cast<std::size_t>(p)]; }

std::vector<std::string> split_identifier(std::string_view token) {
  std::vector<std::string> parts;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) parts.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < token.size(); ++i) {
    const char c = token[i];
    if (!is_alpha(c) && !is_digit(c) && !is_wide(c)) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      const char prev = cur.back();
      const bool digit_edge = is_digit(prev) != is_digit(c);
      const bool hump = is_lower(prev) && is_upper(c);
      const bool acronym_end = is_upper(prev) && is_upper(c) && i + 1 < token.size() &&
                               is_lower(token[i + 1]);
      if (digit_edge || hump || acronym_end) flush();
    }
    cur.push_back(c);
  }
  flush();
  return parts;
}

bool is_stop_word(std::string_view word) { return stop_set().count(word) != 0; }

TokenSequence normalize(std::string_view text, Origin origin) {
  TokenSequence out;
  out.origin = origin;
  auto emit = [&](std::string_view raw) {
    std::string w = lowercase(raw);
    if (w.empty() || is_stop_word(w)) return;
    w = stem_closure(std::move(w));
    if (w.empty() || is_stop_word(w)) return;
    out.tokens.push_back(std::move(w));
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const auto word_char = [&](char c) {
      return is_alpha(c) || is_digit(c) || is_wide(c) || (origin == Origin::code && c == '_');
    };
    if (!word_char(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && word_char(text[j])) ++j;
    const std::string_view word = text.substr(i, j - i);
    if (origin == Origin::code) {
      for (const auto& part : split_identifier(word)) emit(part);
    } else {
      emit(word);
    }
    i = j;
  }
  return out;
}

const PosTagger& PosTagger::builtin() {
  static const PosTagger tagger = from_tsv(detail::builtin_lexicon_tsv());
  return tagger;
}

PosTagger PosTagger::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_tsv(ss.str());
}

PosTagger PosTagger::from_tsv(std::string_view tsv) {
  std::vector<std::pair<std::string, Pos>> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < tsv.size()) {
    std::size_t eol = tsv.find('\n', pos);
    if (eol == std::string_view::npos) eol = tsv.size();
    std::string_view line = tsv.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw std::invalid_argument("lexicon line " + std::to_string(line_no) + ": missing tab");
    entries.emplace_back(lowercase(line.substr(0, tab)), parse_pos(line.substr(tab + 1)));
  }
  PosTagger t;
  for (auto& [w, p] : entries) t.insert(w, p);
  // Tagging runs on stemmed tokens, so stems inherit the surface word's tag
  // unless a surface entry already claims them.
  for (auto& [w, p] : entries) t.lexicon_.try_emplace(stem_closure(w), p);
  return t;
}

void PosTagger::insert(std::string word, Pos p) { lexicon_.try_emplace(std::move(word), p); }

Pos PosTagger::tag(std::string_view word) const {
  if (word.empty()) return Pos::other;
  if (std::all_of(word.begin(), word.end(), is_digit)) return Pos::numeral;
  if (auto it = lexicon_.find(std::string(word)); it != lexicon_.end()) return it->second;
  if (!std::any_of(word.begin(), word.end(), [](char c) { return is_alpha(c) || is_wide(c); }))
    return Pos::other;
  if (ends_with(word, "ly")) return Pos::adverb;
  if (ends_with(word, "ing") || ends_with(word, "ed") || ends_with(word, "iz") ||
      ends_with(word, "ize") || ends_with(word, "ify"))
    return Pos::verb;
  if (ends_with(word, "able") || ends_with(word, "ible") || ends_with(word, "ous") ||
      ends_with(word, "ful") || ends_with(word, "less") || ends_with(word, "ive") ||
      ends_with(word, "ic"))
    return Pos::adjective;
  return Pos::noun;
}

PosDistribution pos_distribution(const TokenSequence& words, const PosTagger& tagger) {
  PosDistribution d;
  if (words.empty()) return d;
  std::array<std::size_t, kPosCount> counts{};
  for (const auto& w : words.tokens) ++counts[static_cast<std::size_t>(tagger.tag(w))];
  const double total = static_cast<double>(words.size());
  for (std::size_t i = 0; i < kPosCount; ++i)
    d.proportions[i] = static_cast<double>(counts[i]) / total;
  return d;
}

std::array<double, kPosCount> pos_distance(const PosDistribution& old_dist,
                                           const PosDistribution& new_dist) {
  std::array<double, kPosCount> out{};
  for (std::size_t i = 0; i < kPosCount; ++i)
    out[i] = std::abs(old_dist.proportions[i] - new_dist.proportions[i]);
  return out;
}

}  // namespace ccdrift
