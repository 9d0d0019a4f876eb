#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccdrift/syntax.hpp"

namespace ccdrift {

enum class PairKind { method, block };

std::string_view to_string(PairKind k);
std::optional<PairKind> pair_kind_from_string(std::string_view s);

using CodeLine = std::pair<int, std::string>;

struct CodeCommentPair {
  PairKind kind = PairKind::block;
  std::string comment_text;
  LineSpan comment_span;
  std::vector<CodeLine> code_lines;  // comments stripped
  std::optional<std::string> enclosing_method_signature;
  std::optional<std::string> enclosing_class;

  bool operator==(const CodeCommentPair&) const = default;
};

struct AlignedPair {
  std::optional<CodeCommentPair> old_pair;
  std::optional<CodeCommentPair> new_pair;
  double match_score = 0.0;
};

struct AlignConfig {
  double method_body_threshold = 0.6;
  double block_comment_threshold = 0.5;
  // second pass for blocks whose comment was rewritten beyond recognition
  double block_code_threshold = 0.6;
};

/// Block comments inside method bodies. Adjacent comments merge; a scope
/// runs from the first code line after the comment to the last code before
/// the next comment at the same nesting level, or to the end of the block.
/// Scopes of comments nested in sub-blocks are cut out of the outer scope,
/// so no two scopes overlap.
std::vector<CodeCommentPair> extract_block_pairs(std::string_view source, const SyntaxTree& tree);

/// One pair per method with a header comment; code is the body between the
/// braces with every interior comment removed.
std::vector<CodeCommentPair> extract_method_pairs(std::string_view source, const SyntaxTree& tree);

std::vector<AlignedPair> align_pairs(const std::vector<CodeCommentPair>& old_pairs,
                                     const std::vector<CodeCommentPair>& new_pairs,
                                     const AlignConfig& config = {});

/// Pair code joined by newlines.
std::string code_text(const CodeCommentPair& pair);

/// Statement tree of the pair code. Fragments the grammar rejects degrade
/// to one OTHER statement per line.
SyntaxTree fragment_tree(const CodeCommentPair& pair, std::string_view grammar = "curly");

/// Word tokens of a comment, delimiters dropped.
std::vector<std::string> comment_words(std::string_view comment);

}  // namespace ccdrift
