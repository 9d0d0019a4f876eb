#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "ccdrift/distiller.hpp"

namespace ccdrift {

struct RefactoringFlags {
  bool extract_method = false;
  bool inline_method = false;
  bool rename_method = false;
  bool add_parameter = false;
  bool remove_parameter = false;
  bool inline_temp = false;
  bool encapsulate_field = false;
  bool introduce_assertion = false;

  static constexpr std::size_t size = 8;
  std::array<bool, size> values() const;
  static const std::array<std::string_view, size>& names();
  bool any() const;
  RefactoringFlags& operator|=(const RefactoringFlags& o);
  bool operator==(const RefactoringFlags&) const = default;
};

/// The ops of the reverse change: adds and deletes swap, sides swap.
std::vector<ChangeOp> invert_ops(const std::vector<ChangeOp>& ops);

/// A maximal run of consecutive deletes directly followed by an added call
/// to a method of new_tree whose body statements equal the deleted ones.
bool detect_extract_method(const std::vector<ChangeOp>& ops, const SyntaxTree& old_tree,
                           const SyntaxTree& new_tree);

/// Mirror of extract method: a deleted call next to a run of adds equal to
/// the called method's body in old_tree.
bool detect_inline_method(const std::vector<ChangeOp>& ops, const SyntaxTree& old_tree,
                          const SyntaxTree& new_tree);

/// A deleted `e = expr` followed by an update (or a delete/add pair of one
/// kind) whose new text is the old text with every `e` replaced by `expr`.
bool detect_inline_temp(const std::vector<ChangeOp>& ops);

/// Rename/add/remove parameter, encapsulate field and introduce assertion.
/// The change script is the ops plus the declaration change; an empty
/// script yields no flags.
/// The method nodes locate the pair's method in each tree; when absent the
/// first method of each tree is used.
RefactoringFlags detect_simple_refactorings(const std::vector<ChangeOp>& ops,
                                            const SyntaxTree& old_tree, const SyntaxTree& new_tree,
                                            const DeclChange& decl,
                                            std::optional<std::size_t> old_method = std::nullopt,
                                            std::optional<std::size_t> new_method = std::nullopt);

RefactoringFlags detect_refactorings(const std::vector<ChangeOp>& ops, const SyntaxTree& old_tree,
                                     const SyntaxTree& new_tree, const DeclChange& decl,
                                     std::optional<std::size_t> old_method = std::nullopt,
                                     std::optional<std::size_t> new_method = std::nullopt);

}  // namespace ccdrift
