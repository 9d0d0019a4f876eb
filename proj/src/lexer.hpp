#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ccdrift/syntax.hpp"

namespace ccdrift::detail {

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Comment> comments;
  std::vector<std::string> lines;
};

/// C-family lexer: identifiers, numbers, string/char literals, operators,
/// `//` and `/* */` comments. Lines are 1-based.
LexResult lex(std::string_view source);

bool is_keyword(std::string_view word);

}  // namespace ccdrift::detail
