#include "ccdrift/distiller.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <set>
#include <tuple>

namespace ccdrift {
namespace {

constexpr std::array<std::string_view, 3> kActionNames = {"add", "delete", "update"};

using Bigram = std::pair<std::string_view, std::string_view>;

std::map<Bigram, int> bigrams(const std::vector<std::string>& t) {
  static const std::string begin = "\x02";
  static const std::string end = "\x03";
  std::map<Bigram, int> out;
  if (t.empty()) return out;
  ++out[{begin, t.front()}];
  for (std::size_t i = 0; i + 1 < t.size(); ++i) ++out[{t[i], t[i + 1]}];
  ++out[{t.back(), end}];
  return out;
}

bool matchable(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == NodeKind::statement) return a.statement == b.statement;
  return true;
}

class Matcher {
 public:
  Matcher(const SyntaxTree& a, const SyntaxTree& b, double threshold)
      : a_(a), b_(b), threshold_(threshold), a_to_b_(a.size()), b_to_a_(b.size()) {}

  void run() {
    link(0, 0);
    match_children(0, 0);
  }

  const std::vector<std::optional<std::size_t>>& a_to_b() const { return a_to_b_; }
  const std::vector<std::optional<std::size_t>>& b_to_a() const { return b_to_a_; }

 private:
  void link(std::size_t i, std::size_t j) {
    a_to_b_[i] = j;
    b_to_a_[j] = i;
  }

  double similarity(const Node& x, const Node& y) const {
    if (x.kind != NodeKind::statement) {
      // structural containers: same label always pairs, otherwise by header
      if (x.text == y.text) return 1.0;
      if (x.kind == NodeKind::method && x.method && y.method && x.method->name == y.method->name)
        return 1.0;
      if (x.kind == NodeKind::class_decl && x.name == y.name) return 1.0;
    }
    return token_similarity(x.tokens, y.tokens);
  }

  void match_children(std::size_t pa, std::size_t pb) {
    const auto& ca = a_.node(pa).children;
    const auto& cb = b_.node(pb).children;
    std::vector<std::tuple<double, std::size_t, std::size_t>> cand;
    for (std::size_t i = 0; i < ca.size(); ++i)
      for (std::size_t j = 0; j < cb.size(); ++j) {
        const auto& x = a_.node(ca[i]);
        const auto& y = b_.node(cb[j]);
        if (!matchable(x, y)) continue;
        const double s = similarity(x, y);
        if (s >= threshold_) cand.emplace_back(s, i, j);
      }
    std::stable_sort(cand.begin(), cand.end(), [](const auto& l, const auto& r) {
      if (std::get<0>(l) != std::get<0>(r)) return std::get<0>(l) > std::get<0>(r);
      if (std::get<1>(l) != std::get<1>(r)) return std::get<1>(l) < std::get<1>(r);
      return std::get<2>(l) < std::get<2>(r);
    });
    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    for (const auto& [s, i, j] : cand) {
      if (a_to_b_[ca[i]] || b_to_a_[cb[j]]) continue;
      link(ca[i], cb[j]);
      chosen.emplace_back(ca[i], cb[j]);
    }
    for (const auto& [i, j] : chosen) match_children(i, j);
  }

  const SyntaxTree& a_;
  const SyntaxTree& b_;
  double threshold_;
  std::vector<std::optional<std::size_t>> a_to_b_;
  std::vector<std::optional<std::size_t>> b_to_a_;
};

struct Keyed {
  std::size_t old_pos;
  int phase;
  std::size_t new_pos;
  ChangeOp op;
};

std::set<std::string> tokens_of_ops(const std::vector<ChangeOp>& ops) {
  std::set<std::string> out;
  for (const auto& op : ops) {
    for (const auto* t : {&op.old_text, &op.new_text})
      if (*t)
        for (auto& tok : code_tokens(**t)) out.insert(std::move(tok));
  }
  return out;
}

std::map<std::string, std::string> field_index(const std::vector<FieldDecl>& fields) {
  std::map<std::string, std::string> out;
  for (const auto& f : fields) {
    std::string decl = join_tokens(f.modifiers) + " | " + join_tokens(f.type);
    for (const auto& n : f.names) out[n] = decl;
  }
  return out;
}

}  // namespace

std::string_view to_string(ChangeAction a) { return kActionNames[static_cast<std::size_t>(a)]; }

std::optional<ChangeAction> change_action_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i)
    if (kActionNames[i] == s) return static_cast<ChangeAction>(i);
  return std::nullopt;
}

double token_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  const auto ba = bigrams(a);
  const auto bb = bigrams(b);
  int total = 0;
  int common = 0;
  for (const auto& [k, n] : ba) {
    total += n;
    if (auto it = bb.find(k); it != bb.end()) common += std::min(n, it->second);
  }
  for (const auto& [k, n] : bb) total += n;
  return total == 0 ? 0.0 : 2.0 * common / total;
}

std::vector<ChangeOp> diff(const SyntaxTree& old_tree, const SyntaxTree& new_tree,
                           const DiffConfig& config) {
  Matcher m(old_tree, new_tree, config.match_threshold);
  m.run();

  const auto pre_a = old_tree.preorder();
  const auto pre_b = new_tree.preorder();
  std::vector<std::size_t> pos_a(old_tree.size());
  for (std::size_t k = 0; k < pre_a.size(); ++k) pos_a[pre_a[k]] = k;

  std::vector<Keyed> out;
  for (std::size_t k = 0; k < pre_a.size(); ++k) {
    const auto& n = old_tree.node(pre_a[k]);
    if (!n.is_statement()) continue;
    const auto partner = m.a_to_b()[pre_a[k]];
    if (!partner) {
      ChangeOp op;
      op.action = ChangeAction::Delete;
      op.kind = n.statement;
      op.old_text = n.text;
      op.old_span = n.span;
      out.push_back({k, 1, 0, std::move(op)});
    } else if (new_tree.node(*partner).text != n.text) {
      const auto& nn = new_tree.node(*partner);
      ChangeOp op;
      op.action = ChangeAction::Update;
      op.kind = n.statement;
      op.old_text = n.text;
      op.new_text = nn.text;
      op.old_span = n.span;
      op.new_span = nn.span;
      out.push_back({k, 1, 0, std::move(op)});
    }
  }

  // anchor[k]: old position of the first matched node at or after new preorder k
  std::vector<std::size_t> anchor(pre_b.size() + 1, pre_a.size());
  for (std::size_t k = pre_b.size(); k-- > 0;) {
    const auto partner = m.b_to_a()[pre_b[k]];
    anchor[k] = partner ? pos_a[*partner] : anchor[k + 1];
  }
  for (std::size_t k = 0; k < pre_b.size(); ++k) {
    const auto& n = new_tree.node(pre_b[k]);
    if (!n.is_statement() || m.b_to_a()[pre_b[k]]) continue;
    ChangeOp op;
    op.action = ChangeAction::Add;
    op.kind = n.statement;
    op.new_text = n.text;
    op.new_span = n.span;
    out.push_back({anchor[k + 1], 0, k, std::move(op)});
  }

  std::stable_sort(out.begin(), out.end(), [](const Keyed& l, const Keyed& r) {
    return std::tie(l.old_pos, l.phase, l.new_pos) < std::tie(r.old_pos, r.phase, r.new_pos);
  });
  std::vector<ChangeOp> ops;
  ops.reserve(out.size());
  for (auto& k : out) ops.push_back(std::move(k.op));
  return ops;
}

std::size_t count_changes(const std::vector<ChangeOp>& ops) { return ops.size(); }

DeclContext decl_context(const SyntaxTree& tree, std::optional<std::size_t> method_node) {
  DeclContext ctx;
  std::optional<std::size_t> cls;
  if (method_node) {
    ctx.method = tree.node(*method_node).method;
    cls = tree.enclosing(*method_node, NodeKind::class_decl);
  }
  const std::size_t scope = cls.value_or(0);
  for (auto c : tree.node(scope).children)
    if (tree.node(c).kind == NodeKind::field && tree.node(c).field) ctx.fields.push_back(*tree.node(c).field);
  return ctx;
}

DeclContext decl_context(const SyntaxTree& tree) {
  const auto ms = tree.methods();
  if (ms.empty()) return decl_context(tree, std::nullopt);
  return decl_context(tree, ms.front());
}

DeclChange decl_changes(const DeclContext& old_ctx, const DeclContext& new_ctx,
                        const std::vector<ChangeOp>& ops) {
  DeclChange d;
  if (old_ctx.method && new_ctx.method) {
    const auto& a = *old_ctx.method;
    const auto& b = *new_ctx.method;
    d.method_name_changed = a.name != b.name;
    d.return_type_changed = a.return_type != b.return_type;
    d.parameters_changed = a.parameters != b.parameters;
  }
  const auto fa = field_index(old_ctx.fields);
  const auto fb = field_index(new_ctx.fields);
  std::set<std::string> changed;
  for (const auto& [name, decl] : fa) {
    auto it = fb.find(name);
    if (it == fb.end() || it->second != decl) changed.insert(name);
  }
  for (const auto& [name, decl] : fb)
    if (!fa.count(name)) changed.insert(name);
  if (!changed.empty()) {
    const auto used = tokens_of_ops(ops);
    d.class_attributes_changed =
        std::any_of(changed.begin(), changed.end(), [&](const auto& n) { return used.count(n) != 0; });
  }
  return d;
}

DeclChange decl_changes(const SyntaxTree& old_ctx, const SyntaxTree& new_ctx,
                        const std::vector<ChangeOp>& ops) {
  return decl_changes(decl_context(old_ctx), decl_context(new_ctx), ops);
}

}  // namespace ccdrift
