// Pragmatic recognizer for curly-brace object-oriented sources. It knows
// classes, members, methods and the statement forms the change taxonomy
// needs; everything else inside a method is an OTHER statement.

#include <algorithm>
#include <set>

#include "ccdrift/syntax.hpp"
#include "lexer.hpp"

namespace ccdrift {
namespace {

const std::set<std::string, std::less<>> kModifiers = {
    "public", "private",  "protected",    "static",   "final",    "abstract",
    "native", "strictfp", "synchronized", "transient", "volatile", "default",
};

const std::set<std::string, std::less<>> kPrimitives = {
    "int", "long", "short", "byte", "char", "boolean", "double", "float", "var", "void",
};

const std::set<std::string, std::less<>> kAssignOps = {
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=",
};

bool is_identifier(const std::string& t) {
  if (t.empty()) return false;
  const auto c = static_cast<unsigned char>(t.front());
  return (std::isalpha(c) || c == '_' || c == '$' || c >= 0x80) && !detail::is_keyword(t);
}

bool opens(const std::string& t) { return t == "(" || t == "[" || t == "{"; }
bool closes(const std::string& t) { return t == ")" || t == "]" || t == "}"; }

// Skips an annotation starting at toks[k] == "@"; returns the index after it.
std::size_t skip_annotation(const std::vector<std::string>& toks, std::size_t k) {
  ++k;  // '@'
  while (k < toks.size() && (is_identifier(toks[k]) || toks[k] == "." || toks[k] == "interface")) ++k;
  if (k < toks.size() && toks[k] == "(") {
    int d = 0;
    for (; k < toks.size(); ++k) {
      if (toks[k] == "(") ++d;
      if (toks[k] == ")" && --d == 0) return k + 1;
    }
  }
  return k;
}

bool is_declaration(const std::vector<std::string>& t) {
  std::size_t k = 0;
  const std::size_t n = t.size();
  while (k < n && (t[k] == "final" || t[k] == "@")) k = t[k] == "@" ? skip_annotation(t, k) : k + 1;
  if (k >= n) return false;
  if (!is_identifier(t[k]) && !kPrimitives.count(t[k])) return false;
  ++k;
  while (k + 1 < n && t[k] == "." && is_identifier(t[k + 1])) k += 2;
  if (k < n && t[k] == "<") {
    int d = 0;
    for (; k < n; ++k) {
      if (t[k] == "<") ++d;
      else if (t[k] == ">") {
        if (--d == 0) break;
      } else if (t[k] == ";" || t[k] == "(" || t[k] == ")" || t[k] == "=" || t[k] == "{") {
        return false;
      }
    }
    if (k >= n) return false;
    ++k;
  }
  while (k + 1 < n && t[k] == "[" && t[k + 1] == "]") k += 2;
  if (k >= n || !is_identifier(t[k])) return false;
  ++k;
  return k == n || t[k] == "=" || t[k] == "," || t[k] == "[" || t[k] == ":";
}

StatementKind classify(const std::vector<std::string>& t) {
  if (t.empty()) return StatementKind::Other;
  if (t.front() == "return") return StatementKind::Return;
  if (t.front() == "throw") return StatementKind::Throw;
  if (is_declaration(t)) return StatementKind::VariableDeclaration;
  int depth = 0;
  for (const auto& tok : t) {
    if (opens(tok)) ++depth;
    else if (closes(tok)) --depth;
    else if (depth == 0 && kAssignOps.count(tok)) return StatementKind::Assignment;
  }
  for (std::size_t j = 0; j + 1 < t.size(); ++j)
    if (is_identifier(t[j]) && t[j + 1] == "(" && (j == 0 || t[j - 1] != "new"))
      return StatementKind::MethodInvocation;
  return StatementKind::Other;
}

MethodDecl parse_method_decl(const std::vector<std::string>& h) {
  MethodDecl d;
  std::size_t paren = h.size();
  int angle = 0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h[k] == "<") ++angle;
    if (h[k] == ">") --angle;
    if (h[k] == "(" && angle == 0) {
      paren = k;
      break;
    }
  }
  if (paren == 0 || paren == h.size()) return d;
  d.name = h[paren - 1];
  std::size_t k = 0;
  while (k + 1 < paren) {
    if (h[k] == "@") {
      k = skip_annotation(h, k);
    } else if (kModifiers.count(h[k])) {
      d.modifiers.push_back(h[k]);
      ++k;
    } else if (h[k] == "<" && d.return_type.empty()) {
      int dd = 0;
      for (; k + 1 < paren; ++k) {
        if (h[k] == "<") ++dd;
        if (h[k] == ">" && --dd == 0) {
          ++k;
          break;
        }
      }
    } else {
      d.return_type.push_back(h[k]);
      ++k;
    }
  }
  int depth = 0;
  for (k = paren; k < h.size(); ++k) {
    if (h[k] == "(") {
      if (depth++ == 0) continue;
    }
    if (h[k] == ")" && --depth == 0) break;
    d.parameters.push_back(h[k]);
  }
  return d;
}

FieldDecl parse_field_decl(const std::vector<std::string>& h) {
  FieldDecl f;
  std::size_t k = 0;
  std::vector<std::string> rest;
  while (k < h.size()) {
    if (h[k] == "@") {
      k = skip_annotation(h, k);
    } else if (kModifiers.count(h[k]) && rest.empty()) {
      f.modifiers.push_back(h[k++]);
    } else {
      rest.push_back(h[k++]);
    }
  }
  // one group per declarator, initializers dropped
  std::vector<std::vector<std::string>> groups(1);
  int depth = 0;
  bool initializer = false;
  for (const auto& t : rest) {
    if ((t == "<" && !initializer) || opens(t)) ++depth;
    if ((t == ">" && !initializer) || closes(t)) --depth;
    if (t == "," && depth == 0) {
      groups.emplace_back();
      initializer = false;
      continue;
    }
    if (t == "=" && depth == 0) initializer = true;
    if (!initializer) groups.back().push_back(t);
  }
  if (!groups.front().empty()) {
    f.names.push_back(groups.front().back());
    f.type.assign(groups.front().begin(), groups.front().end() - 1);
  }
  for (std::size_t g = 1; g < groups.size(); ++g)
    if (!groups[g].empty()) f.names.push_back(groups[g].front());
  return f;
}

class Parser {
 public:
  explicit Parser(detail::LexResult lx) : lx_(std::move(lx)) {}

  SyntaxTree run(ParseMode mode) {
    Node root;
    root.kind = NodeKind::root;
    root.span = {1, static_cast<int>(lx_.lines.size())};
    nodes_.push_back(std::move(root));
    if (mode == ParseMode::compilation_unit) {
      parse_members(0, std::nullopt);
    } else {
      while (!at_end()) {
        if (text() == "}") throw ParseError(line(), "unbalanced '}'");
        parse_statement(0);
      }
    }
    if (!lx_.tokens.empty()) {
      nodes_[0].first_token = 0;
      nodes_[0].last_token = lx_.tokens.size() - 1;
    }
    return SyntaxTree(std::move(lx_.tokens), std::move(lx_.comments), std::move(nodes_),
                      std::move(lx_.lines));
  }

 private:
  bool at_end() const { return i_ >= lx_.tokens.size(); }
  const std::string& text(std::size_t off = 0) const {
    static const std::string empty;
    return i_ + off < lx_.tokens.size() ? lx_.tokens[i_ + off].text : empty;
  }
  int line() const {
    if (lx_.tokens.empty()) return 1;
    return lx_.tokens[std::min(i_, lx_.tokens.size() - 1)].line;
  }
  int line_of(std::size_t tok) const { return lx_.tokens.at(tok).line; }

  std::vector<std::string> slice(std::size_t from, std::size_t to) const {
    std::vector<std::string> out;
    for (std::size_t k = from; k < to; ++k) out.push_back(lx_.tokens[k].text);
    return out;
  }

  std::size_t add(Node n, std::size_t parent) {
    n.parent = parent;
    n.depth = nodes_[parent].depth + 1;
    nodes_.push_back(std::move(n));
    const std::size_t id = nodes_.size() - 1;
    nodes_[parent].children.push_back(id);
    return id;
  }

  void finish(std::size_t id, std::size_t first_tok, std::size_t last_tok) {
    auto& n = nodes_[id];
    n.first_token = first_tok;
    n.last_token = last_tok;
    n.span = {line_of(first_tok), line_of(last_tok)};
  }

  void set_header(std::size_t id, std::size_t from, std::size_t to) {
    nodes_[id].tokens = slice(from, to);
    nodes_[id].text = join_tokens(nodes_[id].tokens);
  }

  // Consumes a balanced (...) group starting at the current '('.
  void paren_group() {
    if (text() != "(") throw ParseError(line(), "expected '('");
    const std::size_t open = i_;
    int depth = 0;
    for (; !at_end(); ++i_) {
      if (text() == "(") ++depth;
      if (text() == ")" && --depth == 0) {
        ++i_;
        return;
      }
    }
    throw ParseError(line_of(open), "unbalanced '('");
  }

  void braced_body(std::size_t id, bool members) {
    const std::size_t open = i_;
    nodes_[id].body_open = open;
    ++i_;
    if (members) {
      parse_members(id, open);
    } else {
      parse_statements(id, open);
    }
    nodes_[id].body_close = i_;
    ++i_;  // '}'
  }

  void body(std::size_t id) {
    if (at_end()) throw ParseError(line(), "unexpected end of input");
    if (text() == "{") {
      braced_body(id, false);
    } else {
      parse_statement(id);
    }
  }

  void parse_members(std::size_t parent, std::optional<std::size_t> open) {
    while (true) {
      if (at_end()) {
        if (open) throw ParseError(line_of(*open), "unclosed '{'");
        return;
      }
      if (text() == "}") {
        if (open) return;
        throw ParseError(line(), "unbalanced '}'");
      }
      if (text() == ";") {
        ++i_;
        continue;
      }
      parse_member(parent);
    }
  }

  void parse_member(std::size_t parent) {
    const std::size_t start = i_;
    int paren = 0;
    bool has_paren = false;
    bool type_keyword = false;
    while (!at_end()) {
      const auto& t = text();
      if (t == "@" && paren == 0 && text(1) != "interface") {
        ++i_;
        while (!at_end() && (is_identifier(text()) || text() == ".")) ++i_;
        if (text() == "(") paren_group();
        continue;
      }
      if (t == "(") {
        ++paren;
        has_paren = true;
      } else if (t == ")") {
        if (--paren < 0) throw ParseError(line(), "unbalanced ')'");
      } else if (paren == 0 && (t == ";" || t == "{" || t == "=" || t == "}")) {
        break;
      } else if (paren == 0 && (t == "class" || t == "interface" || t == "enum" || t == "record")) {
        if (!(i_ > start && lx_.tokens[i_ - 1].text == ".")) type_keyword = true;
      }
      ++i_;
    }
    if (at_end()) throw ParseError(line_of(i_ > 0 ? i_ - 1 : 0), "unexpected end of input");
    const std::string term = text();
    const auto header = slice(start, i_);
    if (!header.empty() && (header.front() == "package" || header.front() == "import")) {
      if (term == ";") ++i_;
      return;
    }
    if (term == "}") {
      // enum constant list without a trailing ';'
      return;
    }
    Node n;
    if (term == "{") {
      if (type_keyword) {
        n.kind = NodeKind::class_decl;
        for (std::size_t k = 0; k + 1 < header.size(); ++k)
          if (header[k] == "class" || header[k] == "interface" || header[k] == "enum" ||
              header[k] == "record") {
            n.name = header[k + 1];
            break;
          }
      } else if (has_paren) {
        n.kind = NodeKind::method;
        n.method = parse_method_decl(header);
      } else {
        n.kind = NodeKind::block;
      }
      const auto id = add(std::move(n), parent);
      set_header(id, start, i_);
      if (header.empty()) nodes_[id].text = "{";
      braced_body(id, nodes_[id].kind == NodeKind::class_decl);
      finish(id, start, i_ - 1);
      return;
    }
    if (term == ";" && has_paren && !type_keyword) {
      n.kind = NodeKind::method;
      n.method = parse_method_decl(header);
      const auto id = add(std::move(n), parent);
      set_header(id, start, i_);
      ++i_;
      finish(id, start, i_ - 1);
      return;
    }
    n.kind = NodeKind::field;
    if (term == "=") {
      skip_to_semicolon();
      auto full = slice(start, i_);
      if (!full.empty() && full.back() == ";") full.pop_back();
      n.field = parse_field_decl(full);
    } else {
      n.field = parse_field_decl(header);
      ++i_;
    }
    const auto id = add(std::move(n), parent);
    set_header(id, start, i_ - 1);
    finish(id, start, i_ - 1);
  }

  // Consumes through the next ';' outside any bracket.
  void skip_to_semicolon() {
    int depth = 0;
    const std::size_t start = i_;
    while (!at_end()) {
      const auto& t = text();
      if (opens(t)) ++depth;
      if (closes(t)) {
        if (depth == 0) return;
        --depth;
      }
      ++i_;
      if (depth == 0 && t == ";") return;
    }
    if (depth > 0) throw ParseError(line_of(start), "unbalanced brackets");
  }

  void parse_statements(std::size_t parent, std::size_t open) {
    while (true) {
      if (at_end()) throw ParseError(line_of(open), "unclosed '{'");
      if (text() == "}") return;
      parse_statement(parent);
    }
  }

  bool local_type_ahead() const {
    std::size_t k = i_;
    while (k < lx_.tokens.size() && (kModifiers.count(lx_.tokens[k].text) || lx_.tokens[k].text == "@")) {
      if (lx_.tokens[k].text == "@") k += 2;
      else ++k;
    }
    if (k >= lx_.tokens.size()) return false;
    const auto& t = lx_.tokens[k].text;
    return t == "class" || t == "interface" || t == "enum";
  }

  std::size_t compound(std::size_t parent, StatementKind kind, std::size_t header_from) {
    Node n;
    n.kind = NodeKind::statement;
    n.statement = kind;
    const auto id = add(std::move(n), parent);
    set_header(id, header_from, i_);
    return id;
  }

  void parse_statement(std::size_t parent) {
    const std::size_t start = i_;
    const std::string t = text();
    if (t == ";") {
      ++i_;
      return;
    }
    if (t == "{") {
      Node n;
      n.kind = NodeKind::block;
      n.text = "{";
      n.tokens = {"{"};
      const auto id = add(std::move(n), parent);
      braced_body(id, false);
      finish(id, start, i_ - 1);
      return;
    }
    if (t == "if") {
      parse_if(parent);
      return;
    }
    if (t == "else") throw ParseError(line(), "'else' without 'if'");
    if (t == "catch" || t == "finally") throw ParseError(line(), "'" + t + "' without 'try'");
    if (t == "for" || t == "while" || (t == "switch" && text(1) == "(") ||
        (t == "synchronized" && text(1) == "(")) {
      ++i_;
      paren_group();
      const auto kind = t == "for"     ? StatementKind::For
                        : t == "while" ? StatementKind::While
                                       : StatementKind::Other;
      const auto id = compound(parent, kind, start);
      body(id);
      finish(id, start, i_ - 1);
      return;
    }
    if (t == "do") {
      ++i_;
      Node n;
      n.kind = NodeKind::statement;
      n.statement = StatementKind::While;
      const auto id = add(std::move(n), parent);
      body(id);
      if (text() != "while") throw ParseError(line(), "expected 'while' after 'do' body");
      const std::size_t cond = i_;
      ++i_;
      paren_group();
      auto header = slice(cond, i_);
      header.insert(header.begin(), "do");
      nodes_[id].tokens = header;
      nodes_[id].text = join_tokens(header);
      if (text() == ";") ++i_;
      finish(id, start, i_ - 1);
      return;
    }
    if (t == "try") {
      parse_try(parent);
      return;
    }
    if (t == "case") {
      int depth = 0;
      while (!at_end()) {
        const auto& x = text();
        if (opens(x)) ++depth;
        if (closes(x)) --depth;
        ++i_;
        if (depth == 0 && (x == ":" || x == "->")) return;
      }
      return;
    }
    if (t == "default" && (text(1) == ":" || text(1) == "->")) {
      i_ += 2;
      return;
    }
    if (is_identifier(t) && text(1) == ":") {
      i_ += 2;  // label
      return;
    }
    if (local_type_ahead()) {
      parse_member(parent);
      return;
    }
    simple_statement(parent);
  }

  void parse_if(std::size_t parent) {
    std::size_t start = i_;
    ++i_;
    paren_group();
    auto id = compound(parent, StatementKind::If, start);
    body(id);
    finish(id, start, i_ - 1);
    while (text() == "else") {
      start = i_;
      if (text(1) == "if") {
        i_ += 2;
        paren_group();
        id = compound(parent, StatementKind::ElseIf, start);
        body(id);
        finish(id, start, i_ - 1);
        continue;
      }
      ++i_;
      Node n;
      n.kind = NodeKind::block;
      n.text = "else";
      n.tokens = {"else"};
      id = add(std::move(n), parent);
      body(id);
      finish(id, start, i_ - 1);
      break;
    }
  }

  void parse_try(std::size_t parent) {
    const std::size_t start = i_;
    ++i_;
    if (text() == "(") paren_group();
    const auto id = compound(parent, StatementKind::Try, start);
    if (text() != "{") throw ParseError(line(), "expected '{' after 'try'");
    braced_body(id, false);
    finish(id, start, i_ - 1);
    while (text() == "catch") {
      const std::size_t cs = i_;
      ++i_;
      paren_group();
      const auto cid = compound(parent, StatementKind::Catch, cs);
      if (text() != "{") throw ParseError(line(), "expected '{' after 'catch'");
      braced_body(cid, false);
      finish(cid, cs, i_ - 1);
    }
    if (text() == "finally") {
      const std::size_t fs = i_;
      ++i_;
      Node n;
      n.kind = NodeKind::block;
      n.text = "finally";
      n.tokens = {"finally"};
      const auto fid = add(std::move(n), parent);
      if (text() != "{") throw ParseError(line(), "expected '{' after 'finally'");
      braced_body(fid, false);
      finish(fid, fs, i_ - 1);
    }
  }

  void simple_statement(std::size_t parent) {
    const std::size_t start = i_;
    int depth = 0;
    std::size_t end = start;  // exclusive, ';' not included
    bool closed = false;
    while (!at_end()) {
      const auto& x = text();
      if (opens(x)) {
        ++depth;
      } else if (closes(x)) {
        if (depth == 0) {
          if (x != "}") throw ParseError(line(), "unbalanced '" + x + "'");
          break;
        }
        --depth;
      } else if (depth == 0 && x == ";") {
        end = i_;
        ++i_;
        closed = true;
        break;
      }
      ++i_;
    }
    if (depth > 0) throw ParseError(line_of(start), "unbalanced brackets");
    if (!closed) end = i_;
    if (end == start) {
      if (i_ == start) ++i_;  // never stall
      return;
    }
    Node n;
    n.kind = NodeKind::statement;
    const auto id = add(std::move(n), parent);
    set_header(id, start, end);
    nodes_[id].statement = classify(nodes_[id].tokens);
    finish(id, start, i_ - 1);
  }

  detail::LexResult lx_;
  std::vector<Node> nodes_;
  std::size_t i_ = 0;
};

class CurlyGrammar final : public Grammar {
 public:
  std::string_view name() const override { return "curly"; }
  SyntaxTree parse(std::string_view source, ParseMode mode) const override {
    return Parser(detail::lex(source)).run(mode);
  }
};

}  // namespace

std::shared_ptr<const Grammar> make_curly_grammar() { return std::make_shared<CurlyGrammar>(); }

}  // namespace ccdrift
