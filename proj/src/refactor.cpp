#include "ccdrift/refactor.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace ccdrift {
namespace {

struct Call {
  std::string name;
  std::size_t args = 0;
};

bool is_name(const std::string& t) {
  if (t.empty()) return false;
  const auto c = static_cast<unsigned char>(t.front());
  return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

std::optional<Call> invoked(const std::string& text) {
  const auto t = code_tokens(text);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (!is_name(t[i]) || t[i + 1] != "(" || (i > 0 && t[i - 1] == "new")) continue;
    Call c{t[i], 0};
    int depth = 0;
    bool any = false;
    for (std::size_t k = i + 1; k < t.size(); ++k) {
      if (t[k] == "(" || t[k] == "[" || t[k] == "{") {
        if (depth++ == 0) continue;
      }
      if (t[k] == ")" || t[k] == "]" || t[k] == "}") {
        if (--depth == 0) break;
      }
      if (depth == 1 && t[k] == ",") ++c.args;
      any = true;
    }
    if (any) ++c.args;
    return c;
  }
  return std::nullopt;
}

// Statement texts of the body of a method called `name` with `args` params.
std::optional<std::vector<std::string>> body_of(const SyntaxTree& tree, const Call& call) {
  for (auto m : tree.methods()) {
    const auto& n = tree.node(m);
    if (!n.method || !n.body_open || n.method->name != call.name) continue;
    if (n.method->parameter_names().size() != call.args) continue;
    std::vector<std::string> body;
    for (auto s : tree.statements(m)) body.push_back(tree.node(s).text);
    return body;
  }
  return std::nullopt;
}

// Normalized texts of ops[from, to), old or new side.
std::vector<std::string> run_texts(const std::vector<ChangeOp>& ops, std::size_t from, std::size_t to,
                                   bool old_side) {
  std::vector<std::string> out;
  for (std::size_t k = from; k < to; ++k) {
    const auto& t = old_side ? ops[k].old_text : ops[k].new_text;
    out.push_back(join_tokens(code_tokens(t.value_or(""))));
  }
  return out;
}

bool body_matches(const std::vector<std::string>& run, const std::optional<std::vector<std::string>>& body) {
  if (!body || body->empty()) return false;
  if (run.size() != body->size()) return false;
  for (std::size_t k = 0; k < run.size(); ++k)
    if (run[k] != join_tokens(code_tokens((*body)[k]))) return false;
  return true;
}

bool is_call(const ChangeOp& op, ChangeAction action) {
  return op.action == action && op.kind == StatementKind::MethodInvocation;
}

std::vector<std::string> replace_all(const std::vector<std::string>& toks, const std::string& e,
                                     const std::vector<std::string>& expr) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < toks.size(); ++k) {
    const bool member = k > 0 && toks[k - 1] == ".";
    if (toks[k] == e && !member) {
      out.insert(out.end(), expr.begin(), expr.end());
    } else {
      out.push_back(toks[k]);
    }
  }
  return out;
}

std::optional<std::size_t> pick_method(const SyntaxTree& tree, std::optional<std::size_t> m) {
  if (m) return m;
  const auto ms = tree.methods();
  if (ms.empty()) return std::nullopt;
  return ms.front();
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::set<std::string> method_names(const SyntaxTree& tree) {
  std::set<std::string> out;
  for (auto m : tree.methods())
    if (tree.node(m).method) out.insert(lower(tree.node(m).method->name));
  return out;
}

std::vector<FieldDecl> all_fields(const SyntaxTree& tree) {
  std::vector<FieldDecl> out;
  for (auto n : tree.preorder())
    if (tree.node(n).field) out.push_back(*tree.node(n).field);
  return out;
}

bool has(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

std::array<bool, RefactoringFlags::size> RefactoringFlags::values() const {
  return {extract_method, inline_method,    rename_method,     add_parameter,
          remove_parameter, inline_temp, encapsulate_field, introduce_assertion};
}

const std::array<std::string_view, RefactoringFlags::size>& RefactoringFlags::names() {
  static const std::array<std::string_view, size> n = {
      "extract_method",   "inline_method", "rename_method",     "add_parameter",
      "remove_parameter", "inline_temp",   "encapsulate_field", "introduce_assertion"};
  return n;
}

bool RefactoringFlags::any() const {
  const auto v = values();
  return std::any_of(v.begin(), v.end(), [](bool b) { return b; });
}

RefactoringFlags& RefactoringFlags::operator|=(const RefactoringFlags& o) {
  extract_method |= o.extract_method;
  inline_method |= o.inline_method;
  rename_method |= o.rename_method;
  add_parameter |= o.add_parameter;
  remove_parameter |= o.remove_parameter;
  inline_temp |= o.inline_temp;
  encapsulate_field |= o.encapsulate_field;
  introduce_assertion |= o.introduce_assertion;
  return *this;
}

std::vector<ChangeOp> invert_ops(const std::vector<ChangeOp>& ops) {
  std::vector<ChangeOp> out;
  out.reserve(ops.size());
  for (const auto& op : ops) {
    ChangeOp r = op;
    if (op.action == ChangeAction::Add) r.action = ChangeAction::Delete;
    if (op.action == ChangeAction::Delete) r.action = ChangeAction::Add;
    std::swap(r.old_text, r.new_text);
    std::swap(r.old_span, r.new_span);
    out.push_back(std::move(r));
  }
  return out;
}

bool detect_extract_method(const std::vector<ChangeOp>& ops, const SyntaxTree&, const SyntaxTree& new_tree) {
  std::size_t i = 0;
  while (i < ops.size()) {
    if (ops[i].action != ChangeAction::Delete) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < ops.size() && ops[j].action == ChangeAction::Delete) ++j;
    if (j < ops.size() && is_call(ops[j], ChangeAction::Add)) {
      if (auto call = invoked(*ops[j].new_text))
        if (body_matches(run_texts(ops, i, j, true), body_of(new_tree, *call))) return true;
    }
    i = j;
  }
  return false;
}

bool detect_inline_method(const std::vector<ChangeOp>& ops, const SyntaxTree& old_tree, const SyntaxTree&) {
  std::size_t i = 0;
  while (i < ops.size()) {
    if (ops[i].action != ChangeAction::Add) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < ops.size() && ops[j].action == ChangeAction::Add) ++j;
    const auto run = run_texts(ops, i, j, false);
    for (const std::size_t k : {i, j}) {
      if (k == i && k == 0) continue;
      const std::size_t c = k == i ? i - 1 : j;
      if (c >= ops.size() || !is_call(ops[c], ChangeAction::Delete)) continue;
      if (auto call = invoked(*ops[c].old_text))
        if (body_matches(run, body_of(old_tree, *call))) return true;
    }
    i = j;
  }
  return false;
}

bool detect_inline_temp(const std::vector<ChangeOp>& ops) {
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& d = ops[i];
    if (d.action != ChangeAction::Delete) continue;
    if (d.kind != StatementKind::Assignment && d.kind != StatementKind::VariableDeclaration) continue;
    const auto t = code_tokens(d.old_text.value_or(""));
    const auto eq = std::find(t.begin(), t.end(), "=");
    if (eq == t.begin() || eq == t.end() || eq + 1 == t.end()) continue;
    const std::string e = *(eq - 1);
    if (!is_name(e)) continue;
    const std::vector<std::string> expr(eq + 1, t.end());
    std::vector<std::string> wrapped{"("};
    wrapped.insert(wrapped.end(), expr.begin(), expr.end());
    wrapped.push_back(")");
    auto inlined = [&](const std::string& old_text, const std::string& new_text) {
      const auto before = code_tokens(old_text);
      if (std::find(before.begin(), before.end(), e) == before.end()) return false;
      const auto after = code_tokens(new_text);
      return replace_all(before, e, expr) == after || replace_all(before, e, wrapped) == after;
    };
    for (std::size_t j = i; j < ops.size(); ++j) {
      const auto& u = ops[j];
      if (u.action == ChangeAction::Update && inlined(u.old_text.value_or(""), u.new_text.value_or("")))
        return true;
      // a use rewritten past the matcher's similarity threshold shows up as
      // a delete plus an add of the same kind
      if (u.action != ChangeAction::Delete || j == i) continue;
      for (const auto& a : ops)
        if (a.action == ChangeAction::Add && a.kind == u.kind &&
            inlined(u.old_text.value_or(""), a.new_text.value_or("")))
          return true;
    }
  }
  return false;
}

namespace {

bool declared(const DeclChange& d) {
  return d.method_name_changed || d.return_type_changed || d.parameters_changed || d.class_attributes_changed;
}

}  // namespace

RefactoringFlags detect_simple_refactorings(const std::vector<ChangeOp>& ops, const SyntaxTree& old_tree,
                                            const SyntaxTree& new_tree, const DeclChange& decl,
                                            std::optional<std::size_t> old_method,
                                            std::optional<std::size_t> new_method) {
  RefactoringFlags f;
  if (ops.empty() && !declared(decl)) return f;
  const auto om = pick_method(old_tree, old_method);
  const auto nm = pick_method(new_tree, new_method);
  if (om && nm && old_tree.node(*om).method && new_tree.node(*nm).method) {
    const auto& a = *old_tree.node(*om).method;
    const auto& b = *new_tree.node(*nm).method;
    const auto pa = a.parameter_names().size();
    const auto pb = b.parameter_names().size();
    f.rename_method = decl.method_name_changed && a.name != b.name && pa == pb &&
                      old_tree.statements(*om).size() == new_tree.statements(*nm).size();
    if (a.name == b.name) {
      f.add_parameter = pb > pa;
      f.remove_parameter = pb < pa;
    }
  }

  const auto old_methods = method_names(old_tree);
  const auto new_methods = method_names(new_tree);
  const auto new_fields = all_fields(new_tree);
  for (const auto& fo : all_fields(old_tree)) {
    if (!has(fo.modifiers, "public")) continue;
    for (const auto& fn : new_fields) {
      if (!has(fn.modifiers, "private")) continue;
      for (const auto& name : fo.names) {
        if (!has(fn.names, name)) continue;
        for (const char* prefix : {"get", "set", "is"}) {
          const std::string acc = prefix + lower(name);
          if (new_methods.count(acc) && !old_methods.count(acc)) f.encapsulate_field = true;
        }
      }
    }
  }

  for (const auto& op : ops) {
    if (op.action != ChangeAction::Add || !op.new_text) continue;
    const auto t = code_tokens(*op.new_text);
    if (!t.empty() && t.front() == "assert") f.introduce_assertion = true;
  }
  return f;
}

RefactoringFlags detect_refactorings(const std::vector<ChangeOp>& ops, const SyntaxTree& old_tree,
                                     const SyntaxTree& new_tree, const DeclChange& decl,
                                     std::optional<std::size_t> old_method,
                                     std::optional<std::size_t> new_method) {
  if (ops.empty() && !declared(decl)) return {};
  RefactoringFlags f = detect_simple_refactorings(ops, old_tree, new_tree, decl, old_method, new_method);
  f.extract_method = detect_extract_method(ops, old_tree, new_tree);
  f.inline_method = detect_inline_method(ops, old_tree, new_tree);
  f.inline_temp = detect_inline_temp(ops);
  return f;
}

}  // namespace ccdrift
