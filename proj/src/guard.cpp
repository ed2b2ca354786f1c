#include "reqtest/guard.hpp"

#include <cctype>

#include "reqtest/errors.hpp"

namespace reqtest {

Guard::Guard() : Guard(constant(true)) {}

Guard Guard::constant(bool value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = value;
  return Guard(std::move(n));
}

Guard Guard::prop(Phase phase, std::size_t index) {
  auto n = std::make_shared<Node>();
  n->op = Op::Prop;
  n->phase = phase;
  n->index = index;
  return Guard(std::move(n));
}

Guard Guard::negate(Guard g) {
  auto n = std::make_shared<Node>();
  n->op = Op::Not;
  n->lhs = std::make_shared<const Guard>(std::move(g));
  return Guard(std::move(n));
}

namespace {
template <typename NodeT>
void set_children(NodeT& n, Guard lhs, Guard rhs) {
  n.lhs = std::make_shared<const Guard>(std::move(lhs));
  n.rhs = std::make_shared<const Guard>(std::move(rhs));
}
}  // namespace

Guard Guard::conj(Guard lhs, Guard rhs) {
  auto n = std::make_shared<Node>();
  n->op = Op::And;
  set_children(*n, std::move(lhs), std::move(rhs));
  return Guard(std::move(n));
}

Guard Guard::disj(Guard lhs, Guard rhs) {
  auto n = std::make_shared<Node>();
  n->op = Op::Or;
  set_children(*n, std::move(lhs), std::move(rhs));
  return Guard(std::move(n));
}

Guard Guard::implies(Guard lhs, Guard rhs) {
  auto n = std::make_shared<Node>();
  n->op = Op::Implies;
  set_children(*n, std::move(lhs), std::move(rhs));
  return Guard(std::move(n));
}

bool Guard::eval(Valuation v) const {
  switch (op()) {
    case Op::Const:
      return value();
    case Op::Prop: {
      const Bits bits = phase() == Phase::Input ? v.input : v.output;
      return (bits >> index()) & 1u;
    }
    case Op::Not:
      return !lhs().eval(v);
    case Op::And:
      return lhs().eval(v) && rhs().eval(v);
    case Op::Or:
      return lhs().eval(v) || rhs().eval(v);
    case Op::Implies:
      return !lhs().eval(v) || rhs().eval(v);
  }
  return false;
}

bool Guard::mentions(Phase p) const {
  switch (op()) {
    case Op::Const:
      return false;
    case Op::Prop:
      return phase() == p;
    case Op::Not:
      return lhs().mentions(p);
    default:
      return lhs().mentions(p) || rhs().mentions(p);
  }
}

bool operator==(const Guard& a, const Guard& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Guard::Op::Const:
      return a.value() == b.value();
    case Guard::Op::Prop:
      return a.phase() == b.phase() && a.index() == b.index();
    case Guard::Op::Not:
      return a.lhs() == b.lhs();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

namespace {

int precedence(Guard::Op op) {
  switch (op) {
    case Guard::Op::Implies:
      return 1;
    case Guard::Op::Or:
      return 2;
    case Guard::Op::And:
      return 3;
    case Guard::Op::Not:
      return 4;
    default:
      return 5;
  }
}

void print(const Guard& g, const Alphabet& ab, std::string& out) {
  auto child = [&](const Guard& c, bool strict) {
    // `->` is right-associative; & and | are printed left-nested.
    const bool paren = strict ? precedence(c.op()) <= precedence(g.op()) : precedence(c.op()) < precedence(g.op());
    if (paren) out += '(';
    print(c, ab, out);
    if (paren) out += ')';
  };
  switch (g.op()) {
    case Guard::Op::Const:
      out += g.value() ? "true" : "false";
      return;
    case Guard::Op::Prop:
      out += g.phase() == Phase::Input ? ab.inputs()[g.index()] : ab.outputs()[g.index()];
      return;
    case Guard::Op::Not:
      out += '!';
      child(g.lhs(), false);
      return;
    case Guard::Op::And:
      child(g.lhs(), false);
      out += " & ";
      child(g.rhs(), true);
      return;
    case Guard::Op::Or:
      child(g.lhs(), false);
      out += " | ";
      child(g.rhs(), true);
      return;
    case Guard::Op::Implies:
      child(g.lhs(), true);
      out += " -> ";
      child(g.rhs(), false);
      return;
  }
}

class GuardParser {
 public:
  GuardParser(std::string_view text, const Alphabet& ab, std::size_t line, std::size_t column)
      : text_(text), ab_(ab), line_(line), column_(column) {}

  Guard parse() {
    Guard g = parse_implies();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return g;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, column_ + pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  Guard parse_implies() {
    Guard lhs = parse_or();
    if (accept("->")) return Guard::implies(std::move(lhs), parse_implies());
    return lhs;
  }

  Guard parse_or() {
    Guard g = parse_and();
    while (accept("|")) g = Guard::disj(std::move(g), parse_and());
    return g;
  }

  Guard parse_and() {
    Guard g = parse_unary();
    while (accept("&")) g = Guard::conj(std::move(g), parse_unary());
    return g;
  }

  Guard parse_unary() {
    if (accept("!")) return Guard::negate(parse_unary());
    if (accept("(")) {
      Guard g = parse_implies();
      if (!accept(")")) fail("expected ')'");
      return g;
    }
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) {
      if (pos_ == text_.size()) fail("unexpected end of guard");
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
    const std::string_view ident = text_.substr(start, pos_ - start);
    if (ident == "true") return Guard::constant(true);
    if (ident == "false") return Guard::constant(false);
    const auto ref = ab_.find(ident);
    if (!ref) {
      pos_ = start;
      fail("unknown proposition '" + std::string(ident) + "'");
    }
    return Guard::prop(ref->phase, ref->index);
  }

  std::string_view text_;
  const Alphabet& ab_;
  std::size_t line_;
  std::size_t column_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Guard::to_string(const Alphabet& alphabet) const {
  std::string out;
  print(*this, alphabet, out);
  return out;
}

Guard parse_guard(std::string_view text, const Alphabet& alphabet, std::size_t line, std::size_t column) {
  return GuardParser(text, alphabet, line, column).parse();
}

}  // namespace reqtest
