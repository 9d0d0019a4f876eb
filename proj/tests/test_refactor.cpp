#include <doctest.h>

#include "cases.hpp"
#include "ccdrift/pipeline.hpp"
#include "ccdrift/refactor.hpp"

using namespace ccdrift;
using cases::K;

namespace {

PairChange only_change(const char* old_src, const char* new_src) {
  const auto changes = changes_for_file(old_src, new_src);
  REQUIRE(changes.size() == 1);
  return changes.front();
}

}  // namespace

TEST_CASE("refactoring fixture suite") {
  for (const auto& c : cases::refactor_cases()) {
    INFO(c.name);
    const auto pc = only_change(c.old_source, c.new_source);
    CHECK(cases::flag(pc.refactorings, c.kind) == c.expected);
  }
}

TEST_CASE("positive fixtures raise only their own flag") {
  for (const auto& c : cases::refactor_cases()) {
    if (!c.expected) continue;
    INFO(c.name);
    const auto f = only_change(c.old_source, c.new_source).refactorings.values();
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(f[k] == (k == static_cast<std::size_t>(c.kind)));
  }
}

TEST_CASE("inline temp trace over an explicit script") {
  const std::vector<ChangeOp> ops = {
      cases::del(K::VariableDeclaration, "double base = h * w", {1, 1}),
      cases::upd(K::Return, "return base", "return h * w", {2, 2}, {1, 1}),
  };
  CHECK(detect_inline_temp(ops));

  const std::vector<ChangeOp> paren = {
      cases::del(K::Assignment, "base = h + w", {1, 1}),
      cases::upd(K::Return, "return base * 2", "return ( h + w ) * 2", {2, 2}, {1, 1}),
  };
  CHECK(detect_inline_temp(paren));

  const std::vector<ChangeOp> unused = {
      cases::del(K::VariableDeclaration, "double base = h * w", {1, 1}),
      cases::upd(K::Return, "return area", "return area * 2", {2, 2}, {1, 1}),
  };
  CHECK_FALSE(detect_inline_temp(unused));

  const std::vector<ChangeOp> other = {
      cases::del(K::VariableDeclaration, "double base = h * w", {1, 1}),
      cases::upd(K::Return, "return base", "return h + w", {2, 2}, {1, 1}),
  };
  CHECK_FALSE(detect_inline_temp(other));

  // the update must come at or after the deleted assignment
  const std::vector<ChangeOp> before = {
      cases::upd(K::Return, "return base", "return h * w", {1, 1}, {1, 1}),
      cases::del(K::VariableDeclaration, "double base = h * w", {2, 2}),
  };
  CHECK_FALSE(detect_inline_temp(before));
  CHECK_FALSE(detect_inline_temp({}));
}

TEST_CASE("extract and inline method mirror each other") {
  const auto old_t = parse(cases::kReportInline);
  const auto new_t = parse(cases::kReportExtracted);
  const auto& a = cases::refactor_cases()[0];
  const auto pc = only_change(a.old_source, a.new_source);
  REQUIRE(detect_extract_method(pc.ops, old_t, new_t));
  CHECK_FALSE(detect_inline_method(pc.ops, old_t, new_t));
  CHECK(detect_inline_method(invert_ops(pc.ops), new_t, old_t));
  CHECK_FALSE(detect_extract_method(invert_ops(pc.ops), new_t, old_t));
  CHECK(invert_ops(invert_ops(pc.ops)) == pc.ops);

  // deletes without an added call
  std::vector<ChangeOp> dels;
  for (const auto& op : pc.ops)
    if (op.action == ChangeAction::Delete) dels.push_back(op);
  CHECK_FALSE(detect_extract_method(dels, old_t, new_t));
  // call deleted, nothing added
  std::vector<ChangeOp> call_only;
  for (const auto& op : invert_ops(pc.ops))
    if (op.action == ChangeAction::Delete) call_only.push_back(op);
  CHECK_FALSE(detect_inline_method(call_only, new_t, old_t));
}

TEST_CASE("simple refactorings from declarations and added statements") {
  const auto t = parse("class C { int f(int a) { return a; } }");
  const auto u = parse("class C { int f(int a, int b) { return a; } }");
  DeclChange d;
  d.parameters_changed = true;
  auto f = detect_simple_refactorings({}, t, u, d);
  CHECK(f.add_parameter);
  CHECK_FALSE(f.remove_parameter);
  CHECK_FALSE(f.rename_method);

  const std::vector<ChangeOp> assert_op = {cases::add(K::Other, "assert n > 0", {1, 1})};
  CHECK(detect_simple_refactorings(assert_op, t, t, {}).introduce_assertion);

  const auto pub = parse("class P { public int x; void f() { x = 1; } }");
  const auto priv = parse("class P { private int x; int getX() { return x; } void setX(int v) { x = v; } "
                          "void f() { setX(1); } }");
  const std::vector<ChangeOp> some = {cases::upd(K::Other, "a", "b", {1, 1}, {1, 1})};
  CHECK(detect_simple_refactorings(some, pub, priv, {}).encapsulate_field);
  CHECK_FALSE(detect_simple_refactorings(some, pub, pub, {}).encapsulate_field);
}

TEST_CASE("empty change scripts raise nothing") {
  for (const auto& c : cases::refactor_cases()) {
    const auto t = parse(c.old_source);
    const auto u = parse(c.new_source);
    CHECK_FALSE(detect_refactorings({}, t, u, {}).any());
    CHECK_FALSE(detect_extract_method({}, t, u));
    CHECK_FALSE(detect_inline_method({}, t, u));
    CHECK_FALSE(detect_inline_temp({}));
  }
}

TEST_CASE("flag names and order") {
  CHECK(RefactoringFlags::names().size() == 8);
  CHECK(RefactoringFlags::names()[0] == "extract_method");
  CHECK(RefactoringFlags::names()[7] == "introduce_assertion");
  RefactoringFlags a, b;
  a.inline_temp = true;
  b.rename_method = true;
  a |= b;
  CHECK(a.inline_temp);
  CHECK(a.rename_method);
  CHECK(a.any());
  CHECK_FALSE(RefactoringFlags{}.any());
}
