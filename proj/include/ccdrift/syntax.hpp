#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ccdrift {

/// Statement taxonomy. The first nine are the change-feature kinds;
/// Assignment and Return exist for inline-temp detection and the
/// contains-return feature.
enum class StatementKind {
  If,
  ElseIf,
  For,
  While,
  Catch,
  Try,
  Throw,
  MethodInvocation,
  VariableDeclaration,
  Assignment,
  Return,
  Other,
};

inline constexpr std::size_t kStatementKindCount = 12;
inline constexpr std::size_t kFeatureStatementKinds = 9;

std::string_view to_string(StatementKind k);
std::optional<StatementKind> statement_kind_from_string(std::string_view s);

struct LineSpan {
  int first = 0;
  int last = 0;

  bool contains(int line) const { return line >= first && line <= last; }
  int lines() const { return last - first + 1; }
  bool operator==(const LineSpan&) const = default;
};

enum class TokenKind { identifier, keyword, number, string, op };

struct Token {
  TokenKind kind;
  std::string text;
  int line;
  int col = 0;  // byte offset within its first line
};

struct Comment {
  std::string text;  // raw, delimiters included
  LineSpan span;
  bool trailing = false;       // code precedes it on its first line
  std::size_t next_token = 0;  // index of the first code token after it
  int brace_depth = 0;
};

struct MethodDecl {
  std::string name;
  std::vector<std::string> modifiers;
  std::vector<std::string> return_type;
  std::vector<std::string> parameters;  // raw tokens between the parentheses

  std::vector<std::string> parameter_types() const;
  std::vector<std::string> parameter_names() const;
  std::string signature() const;  // name(type,type)
};

struct FieldDecl {
  std::vector<std::string> modifiers;
  std::vector<std::string> type;
  std::vector<std::string> names;
};

enum class NodeKind {
  root,
  class_decl,
  method,
  field,
  statement,
  block,  // structural: bare braces, else, finally, initializers
};

struct Node {
  NodeKind kind = NodeKind::root;
  StatementKind statement = StatementKind::Other;
  std::string text;                 // header tokens joined by single spaces
  std::vector<std::string> tokens;  // header tokens
  LineSpan span;
  int depth = 0;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
  std::size_t first_token = 0;
  std::size_t last_token = 0;
  // Token indices of the body braces, when the node has a braced body.
  std::optional<std::size_t> body_open;
  std::optional<std::size_t> body_close;
  std::optional<MethodDecl> method;
  std::optional<FieldDecl> field;
  std::string name;  // class name for class_decl

  bool is_statement() const { return kind == NodeKind::statement; }
};

/// Immutable parse result. Node 0 is the root; comments are annotations
/// carried alongside the tree, never nodes.
class SyntaxTree {
 public:
  SyntaxTree() = default;
  SyntaxTree(std::vector<Token> tokens, std::vector<Comment> comments, std::vector<Node> nodes,
             std::vector<std::string> lines);

  const Node& root() const { return nodes_.front(); }
  const Node& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  const std::vector<Comment>& comments() const { return comments_; }
  const std::vector<std::string>& source_lines() const { return lines_; }

  /// Node indices in document order.
  std::vector<std::size_t> preorder() const;
  std::vector<std::size_t> preorder(std::size_t from) const;
  /// Statement nodes under `from`, document order.
  std::vector<std::size_t> statements(std::size_t from = 0) const;
  std::vector<std::size_t> methods() const;
  std::optional<std::size_t> enclosing(std::size_t node, NodeKind kind) const;
  /// Innermost node whose braced body strictly contains token index `tok`.
  std::optional<std::size_t> innermost_body(std::size_t tok) const;

 private:
  std::vector<Token> tokens_;
  std::vector<Comment> comments_;
  std::vector<Node> nodes_;
  std::vector<std::string> lines_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class ParseMode {
  compilation_unit,  // classes, members, methods
  statements,        // a bare statement list, e.g. the code of one pair
};

class Grammar {
 public:
  virtual ~Grammar() = default;
  virtual std::string_view name() const = 0;
  virtual SyntaxTree parse(std::string_view source, ParseMode mode) const = 0;
};

/// Lookup by identifier; "curly" and "java" resolve to the shipped
/// curly-brace grammar. Throws std::invalid_argument for unknown ids.
const Grammar& grammar_for(std::string_view id);
void register_grammar(std::string id, std::shared_ptr<const Grammar> grammar);

SyntaxTree parse(std::string_view source, std::string_view grammar = "curly",
                 ParseMode mode = ParseMode::compilation_unit);

/// Tokens joined by single spaces.
std::string join_tokens(const std::vector<std::string>& tokens, std::size_t from = 0,
                        std::size_t to = std::string::npos);

/// Splits text into the grammar's token texts, comments dropped.
std::vector<std::string> code_tokens(std::string_view text);

}  // namespace ccdrift
