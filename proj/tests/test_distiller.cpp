#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "cases.hpp"
#include "ccdrift/distiller.hpp"
#include "ccdrift/random.hpp"

using namespace ccdrift;

namespace {

SyntaxTree stmts(const std::string& src) { return parse(src, "curly", ParseMode::statements); }

// Direct Dice over boundary-padded bigrams of the token strings.
double dice(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  auto grams = [](const std::vector<std::string>& t) {
    std::vector<std::string> padded{"\x01"};
    padded.insert(padded.end(), t.begin(), t.end());
    padded.push_back("\x02");
    std::multiset<std::string> g;
    for (std::size_t i = 0; i + 1 < padded.size(); ++i) g.insert(padded[i] + "\x03" + padded[i + 1]);
    return g;
  };
  const auto ga = grams(a), gb = grams(b);
  std::size_t shared = 0;
  for (auto it = ga.begin(); it != ga.end(); it = ga.upper_bound(*it))
    shared += std::min(ga.count(*it), gb.count(*it));
  return 2.0 * static_cast<double>(shared) / static_cast<double>(ga.size() + gb.size());
}

}  // namespace

TEST_CASE("token similarity matches a direct bigram count") {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"generator . setSernoOctetSize ( 8 )", "generator . setSernoOctetSize ( 4 )"},
      {"int total = 0", "long total = 0"},
      {"a = compute ( x )", "a = fetch ( )"},
      {"a a a", "a a"},
      {"x", "y"},
  };
  auto split = [](const std::string& s) { return code_tokens(s); };
  for (const auto& [a, b] : pairs) CHECK(token_similarity(split(a), split(b)) == doctest::Approx(dice(split(a), split(b))).epsilon(1e-15));
  CHECK(token_similarity({}, {}) == 1.0);
}

TEST_CASE("hand-derived change scripts") {
  for (const auto& c : cases::diff_cases()) {
    INFO(c.name);
    const auto ops = diff(stmts(c.old_code), stmts(c.new_code));
    CHECK(ops == c.expected);
  }
}

TEST_CASE("diff of a tree with itself is empty and diff is stable") {
  for (const auto& c : cases::diff_cases()) {
    const auto t = stmts(c.old_code);
    CHECK(diff(t, t).empty());
    CHECK(diff(stmts(c.old_code), stmts(c.new_code)) == diff(stmts(c.old_code), stmts(c.new_code)));
  }
}

TEST_CASE("ops carry the sides their action requires") {
  for (const auto& c : cases::diff_cases()) {
    for (const auto& op : diff(stmts(c.old_code), stmts(c.new_code))) {
      CHECK(op.old_text.has_value() == (op.action != ChangeAction::Add));
      CHECK(op.old_span.has_value() == (op.action != ChangeAction::Add));
      CHECK(op.new_text.has_value() == (op.action != ChangeAction::Delete));
      CHECK(op.new_span.has_value() == (op.action != ChangeAction::Delete));
    }
  }
}

TEST_CASE("flat programs: op counts agree with an exhaustive greedy matching") {
  const std::vector<std::string> pool = {
      "a();", "b(1);", "b(2);", "x = 1;", "x = 2;", "y = f(x);", "int n = 0;", "int m = 0;",
      "return x;", "return y;", "log(\"a\");", "log(\"b\", 2);", "throw new E();", "c.d(e, f);", "c.d(e);",
  };
  Rng rng(derive_seed(42, 0));
  for (int trial = 0; trial < 300; ++trial) {
    auto draw = [&] {
      std::vector<std::string> s;
      const auto n = uniform_index(rng, 13);
      for (std::uint64_t i = 0; i < n; ++i) s.push_back(pool[uniform_index(rng, pool.size())]);
      return s;
    };
    const auto a = draw(), b = draw();
    std::string sa, sb;
    for (const auto& s : a) sa += s + "\n";
    for (const auto& s : b) sb += s + "\n";
    const auto ta = stmts(sa), tb = stmts(sb);
    const auto na = ta.statements(), nb = tb.statements();
    REQUIRE(na.size() == a.size());

    std::vector<std::tuple<double, std::size_t, std::size_t>> cand;
    for (std::size_t i = 0; i < na.size(); ++i)
      for (std::size_t j = 0; j < nb.size(); ++j) {
        if (ta.node(na[i]).statement != tb.node(nb[j]).statement) continue;
        const double s = dice(ta.node(na[i]).tokens, tb.node(nb[j]).tokens);
        if (s >= 0.6) cand.emplace_back(-s, i, j);
      }
    std::sort(cand.begin(), cand.end());
    std::vector<bool> ua(na.size()), ub(nb.size());
    std::size_t updates = 0, matched = 0;
    for (const auto& [s, i, j] : cand) {
      if (ua[i] || ub[j]) continue;
      ua[i] = ub[j] = true;
      ++matched;
      if (ta.node(na[i]).text != tb.node(nb[j]).text) ++updates;
    }
    const auto ops = diff(ta, tb);
    std::map<ChangeAction, std::size_t> n;
    for (const auto& op : ops) ++n[op.action];
    CHECK(n[ChangeAction::Delete] == na.size() - matched);
    CHECK(n[ChangeAction::Add] == nb.size() - matched);
    CHECK(n[ChangeAction::Update] == updates);
    CHECK(count_changes(ops) == ops.size());
  }
}

TEST_CASE("count_changes") {
  CHECK(count_changes({}) == 0);
  CHECK(count_changes(cases::diff_cases()[2].expected) == 3);
  CHECK(count_changes(cases::diff_cases()[1].expected) == 1);
}

TEST_CASE("declaration changes") {
  auto decl = [](const char* a, const char* b, std::vector<ChangeOp> ops = {}) {
    return decl_changes(parse(a), parse(b), ops);
  };
  const auto p = decl("class C { int f(int a) { return a; } }", "class C { int f(int a, int b) { return a; } }");
  CHECK(p.parameters_changed);
  CHECK_FALSE(p.method_name_changed);
  CHECK_FALSE(p.return_type_changed);
  CHECK_FALSE(p.class_attributes_changed);

  const auto r = decl("class C { void g() { } }", "class C { int g() { } }");
  CHECK(r.return_type_changed);
  CHECK_FALSE(r.parameters_changed);

  CHECK(decl("class C { void g() { } }", "class C { void h() { } }").method_name_changed);
  CHECK(decl("class C { int size; void g() { x(size); } }", "class C { int size; void g() { x(size); } }") ==
        DeclChange{});

  const std::vector<ChangeOp> uses{cases::upd(StatementKind::Assignment, "n = size", "n = octets", {1, 1}, {1, 1})};
  CHECK(decl("class C { int size; void g() { n = size; } }", "class C { int octets; void g() { n = octets; } }",
             uses)
            .class_attributes_changed);
  // a renamed field the change never touches does not count
  const std::vector<ChangeOp> other{cases::upd(StatementKind::Assignment, "n = 1", "n = 2", {1, 1}, {1, 1})};
  CHECK_FALSE(decl("class C { int size; void g() { n = 1; } }", "class C { int octets; void g() { n = 2; } }", other)
                  .class_attributes_changed);
}

TEST_CASE("action names round-trip") {
  for (auto a : {ChangeAction::Add, ChangeAction::Delete, ChangeAction::Update})
    CHECK(change_action_from_string(to_string(a)) == a);
  for (std::size_t k = 0; k < kStatementKindCount; ++k) {
    const auto kind = static_cast<StatementKind>(k);
    CHECK(statement_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_FALSE(change_action_from_string("move").has_value());
}
