#include "ccdrift/linker.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <tuple>

#include "ccdrift/distiller.hpp"

namespace ccdrift {
namespace {

struct Group {
  std::size_t first = 0;  // comment indices, inclusive
  std::size_t last = 0;
  std::size_t next = 0;  // first code token after the group
};

std::vector<Group> comment_groups(const SyntaxTree& tree) {
  std::vector<Group> out;
  const auto& cs = tree.comments();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].trailing) continue;
    if (!out.empty() && out.back().next == cs[i].next_token && !cs[out.back().last].trailing) {
      out.back().last = i;
      continue;
    }
    out.push_back({i, i, cs[i].next_token});
  }
  return out;
}

std::string group_text(const SyntaxTree& tree, const Group& g) {
  std::string s;
  for (std::size_t i = g.first; i <= g.last; ++i) {
    if (i > g.first) s += '\n';
    s += tree.comments()[i].text;
  }
  return s;
}

LineSpan group_span(const SyntaxTree& tree, const Group& g) {
  return {tree.comments()[g.first].span.first, tree.comments()[g.last].span.last};
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

// Rebuilds source lines from the kept tokens in [from, to). Spacing between
// neighbouring tokens is preserved unless a comment sat between them.
std::vector<CodeLine> render(const SyntaxTree& tree, std::size_t from, std::size_t to,
                             const std::vector<bool>& keep) {
  const auto& toks = tree.tokens();
  const auto& lines = tree.source_lines();
  std::vector<CodeLine> out;
  std::optional<std::size_t> prev;
  for (std::size_t k = from; k < to && k < toks.size(); ++k) {
    if (!keep[k]) {
      prev.reset();
      continue;
    }
    const auto& t = toks[k];
    const std::string& src = lines.at(static_cast<std::size_t>(t.line - 1));
    if (out.empty() || out.back().first != t.line) {
      std::string indent;
      if (k == 0 || toks[k - 1].line != t.line) {
        const auto pre = src.substr(0, std::min<std::size_t>(t.col, src.size()));
        if (blank(pre)) indent = pre;
      }
      out.emplace_back(t.line, indent);
    } else if (prev && *prev + 1 == k) {
      const auto& p = toks[*prev];
      const std::size_t end = static_cast<std::size_t>(p.col) + p.text.size();
      const std::size_t col = static_cast<std::size_t>(t.col);
      const bool clean = p.line == t.line && end <= col && col <= src.size() &&
                         blank(std::string_view(src).substr(end, col - end));
      out.back().second += clean ? src.substr(end, col - end) : " ";
    } else {
      out.back().second += ' ';
    }
    out.back().second += t.text;
    prev = k;
  }
  return out;
}

std::optional<std::string> class_of(const SyntaxTree& tree, std::size_t node) {
  if (auto c = tree.enclosing(node, NodeKind::class_decl)) return tree.node(*c).name;
  return std::nullopt;
}

std::string method_name(const std::string& signature) {
  return signature.substr(0, signature.find('('));
}

using Candidate = std::tuple<double, std::size_t, std::size_t>;

void greedy(std::vector<Candidate> cand, std::vector<bool>& used_old, std::vector<bool>& used_new,
            std::vector<std::tuple<std::size_t, std::size_t, double>>& matches) {
  std::stable_sort(cand.begin(), cand.end(), [](const Candidate& l, const Candidate& r) {
    if (std::get<0>(l) != std::get<0>(r)) return std::get<0>(l) > std::get<0>(r);
    return std::tie(std::get<1>(l), std::get<2>(l)) < std::tie(std::get<1>(r), std::get<2>(r));
  });
  for (const auto& [s, i, j] : cand) {
    if (used_old[i] || used_new[j]) continue;
    used_old[i] = used_new[j] = true;
    matches.emplace_back(i, j, s);
  }
}

SyntaxTree line_fallback(const CodeCommentPair& pair) {
  std::vector<Node> nodes(1);
  nodes[0].kind = NodeKind::root;
  std::vector<std::string> lines;
  for (const auto& [no, text] : pair.code_lines) {
    lines.push_back(text);
    Node n;
    n.kind = NodeKind::statement;
    n.statement = StatementKind::Other;
    n.tokens = code_tokens(text);
    n.text = join_tokens(n.tokens);
    const int l = static_cast<int>(lines.size());
    n.span = {l, l};
    n.parent = 0;
    n.depth = 1;
    if (n.tokens.empty()) continue;
    nodes.push_back(std::move(n));
    nodes[0].children.push_back(nodes.size() - 1);
  }
  nodes[0].span = {1, static_cast<int>(lines.size())};
  return SyntaxTree({}, {}, std::move(nodes), std::move(lines));
}

}  // namespace

std::string_view to_string(PairKind k) { return k == PairKind::method ? "method" : "block"; }

std::optional<PairKind> pair_kind_from_string(std::string_view s) {
  if (s == "method") return PairKind::method;
  if (s == "block") return PairKind::block;
  return std::nullopt;
}

std::vector<CodeCommentPair> extract_block_pairs(std::string_view, const SyntaxTree& tree) {
  struct Anchor {
    Group group;
    std::size_t container;
    std::size_t method;
    std::size_t begin;
    std::size_t end = 0;  // exclusive
  };
  const auto& toks = tree.tokens();
  std::vector<Anchor> anchors;
  for (const auto& g : comment_groups(tree)) {
    if (g.next >= toks.size()) continue;
    const auto container = tree.innermost_body(g.next);
    if (!container) continue;
    const auto& c = tree.node(*container);
    std::optional<std::size_t> method =
        c.kind == NodeKind::method ? container : tree.enclosing(*container, NodeKind::method);
    if (!method) continue;
    // only comments that sit between statements of their block
    bool boundary = g.next == *c.body_close;
    for (auto ch : c.children)
      if (tree.node(ch).first_token == g.next) boundary = true;
    if (!boundary) continue;
    anchors.push_back({g, *container, *method, g.next});
  }
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    auto& x = anchors[a];
    x.end = *tree.node(x.container).body_close;
    for (std::size_t b = a + 1; b < anchors.size(); ++b)
      if (anchors[b].container == x.container) {
        x.end = anchors[b].begin;
        break;
      }
  }

  std::vector<CodeCommentPair> out;
  std::vector<bool> keep(toks.size());
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    const auto& x = anchors[a];
    if (x.begin >= x.end) continue;  // comment closes its block
    const LineSpan span = group_span(tree, x.group);
    if (toks[x.begin].line <= span.last) continue;
    std::fill(keep.begin() + x.begin, keep.begin() + x.end, true);
    for (std::size_t b = a + 1; b < anchors.size() && anchors[b].begin < x.end; ++b)
      if (anchors[b].container != x.container && anchors[b].begin < anchors[b].end)
        std::fill(keep.begin() + anchors[b].begin, keep.begin() + anchors[b].end, false);
    CodeCommentPair p;
    p.kind = PairKind::block;
    p.comment_text = group_text(tree, x.group);
    p.comment_span = span;
    p.code_lines = render(tree, x.begin, x.end, keep);
    p.enclosing_method_signature = tree.node(x.method).method->signature();
    p.enclosing_class = class_of(tree, x.method);
    std::fill(keep.begin() + x.begin, keep.begin() + x.end, false);
    if (p.code_lines.empty()) continue;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<CodeCommentPair> extract_method_pairs(std::string_view, const SyntaxTree& tree) {
  std::map<std::size_t, Group> by_next;
  for (const auto& g : comment_groups(tree)) by_next.emplace(g.next, g);
  std::vector<CodeCommentPair> out;
  std::vector<bool> keep(tree.tokens().size(), true);
  for (auto m : tree.methods()) {
    const auto& n = tree.node(m);
    auto it = by_next.find(n.first_token);
    if (it == by_next.end() || !n.method) continue;
    CodeCommentPair p;
    p.kind = PairKind::method;
    p.comment_text = group_text(tree, it->second);
    p.comment_span = group_span(tree, it->second);
    if (n.body_open && n.body_close) p.code_lines = render(tree, *n.body_open + 1, *n.body_close, keep);
    p.enclosing_method_signature = n.method->signature();
    p.enclosing_class = class_of(tree, m);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::string> comment_words(std::string_view comment) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : comment) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '_' || u >= 0x80) {
      cur += c;
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string code_text(const CodeCommentPair& pair) {
  std::string s;
  for (const auto& [line, text] : pair.code_lines) {
    s += text;
    s += '\n';
  }
  return s;
}

SyntaxTree fragment_tree(const CodeCommentPair& pair, std::string_view grammar) {
  try {
    return parse(code_text(pair), grammar, ParseMode::statements);
  } catch (const ParseError&) {
    return line_fallback(pair);
  }
}

std::vector<AlignedPair> align_pairs(const std::vector<CodeCommentPair>& old_pairs,
                                     const std::vector<CodeCommentPair>& new_pairs,
                                     const AlignConfig& config) {
  const std::size_t no = old_pairs.size();
  const std::size_t nn = new_pairs.size();
  std::vector<bool> used_old(no), used_new(nn);
  std::vector<std::tuple<std::size_t, std::size_t, double>> matches;

  std::vector<std::vector<std::string>> code_old(no), code_new(nn), words_old(no), words_new(nn);
  for (std::size_t i = 0; i < no; ++i) {
    code_old[i] = code_tokens(code_text(old_pairs[i]));
    words_old[i] = comment_words(old_pairs[i].comment_text);
  }
  for (std::size_t j = 0; j < nn; ++j) {
    code_new[j] = code_tokens(code_text(new_pairs[j]));
    words_new[j] = comment_words(new_pairs[j].comment_text);
  }
  auto sig = [](const CodeCommentPair& p) { return p.enclosing_method_signature.value_or(""); };

  // method pairs: signature, then name, then body similarity
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<Candidate> cand;
    for (std::size_t i = 0; i < no; ++i) {
      if (used_old[i] || old_pairs[i].kind != PairKind::method) continue;
      for (std::size_t j = 0; j < nn; ++j) {
        if (used_new[j] || new_pairs[j].kind != PairKind::method) continue;
        const auto& a = old_pairs[i];
        const auto& b = new_pairs[j];
        if (pass == 0 && a.enclosing_method_signature && sig(a) == sig(b)) {
          cand.emplace_back(1.0, i, j);
        } else if (pass == 1 && a.enclosing_method_signature && b.enclosing_method_signature &&
                   method_name(sig(a)) == method_name(sig(b))) {
          cand.emplace_back(token_similarity(code_old[i], code_new[j]), i, j);
        } else if (pass == 2) {
          const double s = token_similarity(code_old[i], code_new[j]);
          if (s >= config.method_body_threshold) cand.emplace_back(s, i, j);
        }
      }
    }
    greedy(std::move(cand), used_old, used_new, matches);
  }

  std::map<std::string, std::string> renamed;
  for (const auto& [i, j, s] : matches) renamed[sig(old_pairs[i])] = sig(new_pairs[j]);
  auto same_method = [&](const CodeCommentPair& a, const CodeCommentPair& b) {
    if (sig(a) == sig(b)) return true;
    auto it = renamed.find(sig(a));
    return it != renamed.end() && it->second == sig(b);
  };

  for (int pass = 0; pass < 2; ++pass) {
    std::vector<Candidate> cand;
    for (std::size_t i = 0; i < no; ++i) {
      if (used_old[i] || old_pairs[i].kind != PairKind::block) continue;
      for (std::size_t j = 0; j < nn; ++j) {
        if (used_new[j] || new_pairs[j].kind != PairKind::block) continue;
        if (!same_method(old_pairs[i], new_pairs[j])) continue;
        if (pass == 0) {
          const double s = token_similarity(words_old[i], words_new[j]);
          if (s >= config.block_comment_threshold) cand.emplace_back(s, i, j);
        } else {
          const double s = token_similarity(code_old[i], code_new[j]);
          if (s >= config.block_code_threshold) cand.emplace_back(s, i, j);
        }
      }
    }
    greedy(std::move(cand), used_old, used_new, matches);
  }

  std::sort(matches.begin(), matches.end());
  std::vector<AlignedPair> out;
  for (const auto& [i, j, s] : matches) out.push_back({old_pairs[i], new_pairs[j], s});
  for (std::size_t i = 0; i < no; ++i)
    if (!used_old[i]) out.push_back({old_pairs[i], std::nullopt, 0.0});
  for (std::size_t j = 0; j < nn; ++j)
    if (!used_new[j]) out.push_back({std::nullopt, new_pairs[j], 0.0});
  return out;
}

}  // namespace ccdrift
