#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "reqtest/alphabet.hpp"

namespace reqtest {

/// Boolean combination of propositions, stored as an immutable expression
/// tree and evaluated directly on valuations.
class Guard {
 public:
  enum class Op { Const, Prop, Not, And, Or, Implies };

  /// The constant `true`.
  Guard();

  static Guard constant(bool value);
  static Guard prop(Phase phase, std::size_t index);
  static Guard negate(Guard g);
  static Guard conj(Guard lhs, Guard rhs);
  static Guard disj(Guard lhs, Guard rhs);
  static Guard implies(Guard lhs, Guard rhs);

  Op op() const { return node_->op; }
  bool value() const { return node_->value; }
  Phase phase() const { return node_->phase; }
  std::size_t index() const { return node_->index; }
  const Guard& lhs() const { return *node_->lhs; }
  const Guard& rhs() const { return *node_->rhs; }

  bool eval(Valuation v) const;
  bool is_true_constant() const { return op() == Op::Const && value(); }

  /// True if some proposition of the given phase occurs in the guard.
  bool mentions(Phase phase) const;

  /// Concrete syntax using the alphabet's names; parses back to an equal tree.
  std::string to_string(const Alphabet& alphabet) const;

  friend bool operator==(const Guard& a, const Guard& b);

 private:
  struct Node {
    Op op = Op::Const;
    bool value = true;
    Phase phase = Phase::Input;
    std::size_t index = 0;
    std::shared_ptr<const Guard> lhs;
    std::shared_ptr<const Guard> rhs;
  };
  explicit Guard(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses `expr := expr "->" expr | expr "|" expr | expr "&" expr | "!" expr
/// | "(" expr ")" | ident | "true" | "false"` with precedence ! > & > | > ->.
/// Unknown propositions and syntax errors raise ParseError; `line`/`column`
/// locate the start of `text` in its enclosing file.
Guard parse_guard(std::string_view text, const Alphabet& alphabet, std::size_t line = 1, std::size_t column = 1);

}  // namespace reqtest
