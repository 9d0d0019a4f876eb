#include "ccdrift/syntax.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <mutex>
#include <unordered_set>

#include "lexer.hpp"

namespace ccdrift {

namespace {

constexpr std::array<std::string_view, kStatementKindCount> kKindNames = {
    "IF",     "ELSE_IF", "FOR",        "WHILE",  "CATCH", "TRY",
    "THROW",  "METHOD_INVOCATION",     "VARIABLE_DECLARATION",
    "ASSIGNMENT", "RETURN", "OTHER",
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         static_cast<unsigned char>(c) >= 0x80;
}
bool ident_char(char c) {
  return ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

// Longest-match operator table. '<' and '>' stay single so nested generic
// closers never fuse into shifts.
constexpr std::array<std::string_view, 26> kOperators = {
    "...", "->", "::", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=",
    "*=",  "/=", "%=", "&=", "|=", "^=", "<<", "<<=", "=",  "(",  ")",  "{",  "}",
};

std::vector<std::vector<std::string>> parameter_groups(const std::vector<std::string>& toks) {
  std::vector<std::vector<std::string>> groups;
  std::vector<std::string> cur;
  int depth = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& t = toks[i];
    if (t == "<" || t == "(" || t == "[") ++depth;
    if (t == ">" || t == ")" || t == "]") --depth;
    if (t == "," && depth == 0) {
      groups.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    // annotations and final carry no type information
    if (depth == 0 && t == "@" && i + 1 < toks.size()) {
      ++i;
      if (i + 1 < toks.size() && toks[i + 1] == "(") {
        int d = 0;
        for (++i; i < toks.size(); ++i) {
          if (toks[i] == "(") ++d;
          if (toks[i] == ")" && --d == 0) break;
        }
      }
      continue;
    }
    if (depth == 0 && t == "final") continue;
    cur.push_back(t);
  }
  if (!cur.empty()) groups.push_back(std::move(cur));
  return groups;
}

struct Registry {
  std::mutex mu;
  std::map<std::string, std::shared_ptr<const Grammar>, std::less<>> grammars;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

std::shared_ptr<const Grammar> make_curly_grammar();

namespace detail {

bool is_keyword(std::string_view w) {
  static const std::unordered_set<std::string_view> kw = {
      "abstract", "assert",     "boolean",  "break",     "byte",     "case",
      "catch",    "char",       "class",    "const",     "continue", "default",
      "do",       "double",     "else",     "enum",      "extends",  "final",
      "finally",  "float",      "for",      "goto",      "if",       "implements",
      "import",   "instanceof", "int",      "interface", "long",     "native",
      "new",      "package",    "private",  "protected", "public",   "return",
      "short",    "static",     "strictfp", "super",     "switch",   "synchronized",
      "this",     "throw",      "throws",   "transient", "try",      "void",
      "volatile", "while",      "true",     "false",     "null",     "var",
      "record",   "yield",
  };
  return kw.count(w) != 0;
}

LexResult lex(std::string_view src) {
  LexResult out;
  int line = 1;
  std::size_t i = 0;
  int depth = 0;
  int last_code_line = 0;
  std::size_t line_start = 0;
  int cur_col = 0;

  std::size_t bol = 0;
  for (std::size_t p = 0; p <= src.size(); ++p) {
    if (p == src.size() || src[p] == '\n') {
      std::string l(src.substr(bol, p - bol));
      if (!l.empty() && l.back() == '\r') l.pop_back();
      out.lines.push_back(std::move(l));
      bol = p + 1;
    }
  }

  auto push = [&](TokenKind k, std::string text) {
    if (text == "{") ++depth;
    if (text == "}") --depth;
    out.tokens.push_back(Token{k, std::move(text), line, cur_col});
    last_code_line = line;
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && (src[i + 1] == '/' || src[i + 1] == '*')) {
      Comment cm;
      cm.span.first = line;
      cm.trailing = last_code_line == line;
      cm.next_token = out.tokens.size();
      cm.brace_depth = depth;
      const std::size_t start = i;
      if (src[i + 1] == '/') {
        while (i < src.size() && src[i] != '\n') ++i;
      } else {
        i += 2;
        while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) {
          if (src[i] == '\n') {
            ++line;
            line_start = i + 1;
          }
          ++i;
        }
        i = std::min(src.size(), i + 2);
      }
      cm.text = std::string(src.substr(start, i - start));
      if (!cm.text.empty() && cm.text.back() == '\r') cm.text.pop_back();
      cm.span.last = line;
      out.comments.push_back(std::move(cm));
      continue;
    }
    cur_col = static_cast<int>(i - line_start);
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string w(src.substr(i, j - i));
      const TokenKind k = is_keyword(w) ? TokenKind::keyword : TokenKind::identifier;
      push(k, std::move(w));
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '.' || src[j] == '_'))
        ++j;
      push(TokenKind::number, std::string(src.substr(i, j - i)));
      i = j;
      continue;
    }
    if (c == '"' || c == '\'') {
      const int start_line = line;
      std::size_t j = i + 1;
      const bool text_block = c == '"' && src.substr(i, 3) == "\"\"\"";
      if (text_block) {
        j = i + 3;
        while (j < src.size() && src.substr(j, 3) != "\"\"\"") {
          if (src[j] == '\n') {
            ++line;
            line_start = j + 1;
          }
          ++j;
        }
        j = std::min(src.size(), j + 3);
      } else {
        while (j < src.size() && src[j] != c && src[j] != '\n') {
          if (src[j] == '\\') ++j;
          ++j;
        }
        if (j < src.size() && src[j] == c) ++j;
      }
      const int end_line = line;
      line = start_line;
      push(TokenKind::string, std::string(src.substr(i, j - i)));
      line = end_line;
      i = j;
      continue;
    }
    std::string_view best;
    for (auto op : kOperators)
      if (op.size() > best.size() && src.substr(i, op.size()) == op) best = op;
    if (best.empty()) best = src.substr(i, 1);
    push(TokenKind::op, std::string(best));
    i += best.size();
  }
  return out;
}

}  // namespace detail

std::string_view to_string(StatementKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<StatementKind> statement_kind_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == s) return static_cast<StatementKind>(i);
  return std::nullopt;
}

std::vector<std::string> MethodDecl::parameter_types() const {
  std::vector<std::string> out;
  for (auto& g : parameter_groups(parameters)) {
    if (g.size() >= 2 && ident_start(g.back().front())) g.pop_back();
    out.push_back(join_tokens(g));
  }
  return out;
}

std::vector<std::string> MethodDecl::parameter_names() const {
  std::vector<std::string> out;
  for (auto& g : parameter_groups(parameters))
    if (!g.empty()) out.push_back(g.back());
  return out;
}

std::string MethodDecl::signature() const {
  std::string s = name + "(";
  const auto types = parameter_types();
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (i) s += ",";
    for (char c : types[i])
      if (c != ' ') s += c;
  }
  return s + ")";
}

SyntaxTree::SyntaxTree(std::vector<Token> tokens, std::vector<Comment> comments,
                       std::vector<Node> nodes, std::vector<std::string> lines)
    : tokens_(std::move(tokens)),
      comments_(std::move(comments)),
      nodes_(std::move(nodes)),
      lines_(std::move(lines)) {}

std::vector<std::size_t> SyntaxTree::preorder() const { return preorder(0); }

std::vector<std::size_t> SyntaxTree::preorder(std::size_t from) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{from};
  while (!stack.empty()) {
    const auto n = stack.back();
    stack.pop_back();
    out.push_back(n);
    const auto& ch = nodes_[n].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<std::size_t> SyntaxTree::statements(std::size_t from) const {
  std::vector<std::size_t> out;
  for (auto n : preorder(from))
    if (nodes_[n].is_statement()) out.push_back(n);
  return out;
}

std::vector<std::size_t> SyntaxTree::methods() const {
  std::vector<std::size_t> out;
  for (auto n : preorder())
    if (nodes_[n].kind == NodeKind::method) out.push_back(n);
  return out;
}

std::optional<std::size_t> SyntaxTree::enclosing(std::size_t node, NodeKind kind) const {
  auto p = nodes_.at(node).parent;
  while (p) {
    if (nodes_[*p].kind == kind) return p;
    p = nodes_[*p].parent;
  }
  return std::nullopt;
}

std::optional<std::size_t> SyntaxTree::innermost_body(std::size_t tok) const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (!n.body_open || !n.body_close) continue;
    if (*n.body_open < tok && tok <= *n.body_close) {
      if (!best || *nodes_[*best].body_open < *n.body_open) best = i;
    }
  }
  return best;
}

const Grammar& grammar_for(std::string_view id) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  if (r.grammars.empty()) {
    auto curly = make_curly_grammar();
    r.grammars.emplace("curly", curly);
    r.grammars.emplace("java", curly);
  }
  auto it = r.grammars.find(id);
  if (it == r.grammars.end())
    throw std::invalid_argument("unsupported grammar: " + std::string(id));
  return *it->second;
}

void register_grammar(std::string id, std::shared_ptr<const Grammar> grammar) {
  grammar_for("curly");  // seed the defaults first
  auto& r = registry();
  std::lock_guard lock(r.mu);
  r.grammars[std::move(id)] = std::move(grammar);
}

SyntaxTree parse(std::string_view source, std::string_view grammar, ParseMode mode) {
  return grammar_for(grammar).parse(source, mode);
}

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t from, std::size_t to) {
  std::string s;
  to = std::min(to, tokens.size());
  for (std::size_t i = from; i < to; ++i) {
    if (i > from) s += ' ';
    s += tokens[i];
  }
  return s;
}

std::vector<std::string> code_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : detail::lex(text).tokens) out.push_back(std::move(t.text));
  return out;
}

}  // namespace ccdrift
