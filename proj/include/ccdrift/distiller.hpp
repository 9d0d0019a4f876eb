#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccdrift/syntax.hpp"

namespace ccdrift {

enum class ChangeAction { Add, Delete, Update };

std::string_view to_string(ChangeAction a);
std::optional<ChangeAction> change_action_from_string(std::string_view s);

/// One fine-grained statement change. Add carries only new_*, Delete only
/// old_*, Update both.
struct ChangeOp {
  ChangeAction action = ChangeAction::Update;
  StatementKind kind = StatementKind::Other;
  std::optional<std::string> old_text;
  std::optional<std::string> new_text;
  std::optional<LineSpan> old_span;
  std::optional<LineSpan> new_span;

  bool operator==(const ChangeOp&) const = default;
};

struct DeclChange {
  bool method_name_changed = false;
  bool return_type_changed = false;
  bool parameters_changed = false;
  bool class_attributes_changed = false;

  bool operator==(const DeclChange&) const = default;
};

struct DiffConfig {
  double match_threshold = 0.6;
};

/// Dice coefficient over boundary-padded token bigrams, in [0, 1].
double token_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Statements are matched greedily by kind and token similarity inside
/// matched parents. Unmatched old statements become deletes, unmatched new
/// ones adds, matched ones with different text updates. Output is ordered
/// by position in the old tree; adds take the old position of the next
/// matched node that follows them.
std::vector<ChangeOp> diff(const SyntaxTree& old_tree, const SyntaxTree& new_tree,
                           const DiffConfig& config = {});

std::size_t count_changes(const std::vector<ChangeOp>& ops);

/// Declaration context of a changed pair: its enclosing method and the
/// fields of the enclosing class.
struct DeclContext {
  std::optional<MethodDecl> method;
  std::vector<FieldDecl> fields;
};

DeclContext decl_context(const SyntaxTree& tree, std::optional<std::size_t> method_node);
/// Context of the first method in `tree` (or none) and its class fields.
DeclContext decl_context(const SyntaxTree& tree);

DeclChange decl_changes(const DeclContext& old_ctx, const DeclContext& new_ctx,
                        const std::vector<ChangeOp>& ops);
DeclChange decl_changes(const SyntaxTree& old_ctx, const SyntaxTree& new_ctx,
                        const std::vector<ChangeOp>& ops);

}  // namespace ccdrift
