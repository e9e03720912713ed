#include "ipl/formula.hpp"

#include <cctype>
#include <map>
#include <set>
#include <utility>

namespace ipl {

ParseError::ParseError(std::string message, std::size_t position)
    : std::runtime_error(std::move(message)), position_(position) {}

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

// Precedence: -> lowest (right-assoc), then |, then & (both left-assoc);
// atoms highest. Matches the parser below.
int precedence(Op op) {
  switch (op) {
    case Op::Imp: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    default: return 5;
  }
}

const char* op_token(Op op) {
  switch (op) {
    case Op::And: return " & ";
    case Op::Or: return " | ";
    default: return " -> ";
  }
}

}  // namespace

int Formula::var_index() const {
  if (node_->op != Op::Var) throw std::logic_error("var_index on non-variable");
  return node_->var_index;
}

Formula Formula::make(Op op, int var_index, Formula lhs, Formula rhs) {
  auto node = std::make_shared<detail::FormulaNode>();
  node->op = op;
  node->var_index = var_index;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  switch (op) {
    case Op::Var:
      node->length = 1;
      node->weight = 1;
      node->hash = mix(0x11, static_cast<std::size_t>(var_index));
      node->text = "P" + std::to_string(var_index);
      break;
    case Op::Bottom:
      node->length = 1;
      node->weight = 1;
      node->hash = 0x22;
      node->text = "false";
      break;
    default: {
      const Formula& a = node->lhs;
      const Formula& b = node->rhs;
      node->length = a.length() + b.length() + 1;
      node->weight = a.weight() + b.weight() + (op == Op::And ? 2 : 1);
      node->hash = mix(mix(static_cast<std::size_t>(op) + 0x33, a.hash()), b.hash());
      const int prec = precedence(op);
      const bool right_assoc = op == Op::Imp;
      const bool paren_left =
          precedence(a.op()) < prec || (right_assoc && precedence(a.op()) == prec);
      const bool paren_right =
          precedence(b.op()) < prec || (!right_assoc && precedence(b.op()) == prec);
      std::string text;
      text.reserve(a.text().size() + b.text().size() + 8);
      if (paren_left) text += "(";
      text += a.text();
      if (paren_left) text += ")";
      text += op_token(op);
      if (paren_right) text += "(";
      text += b.text();
      if (paren_right) text += ")";
      node->text = std::move(text);
      break;
    }
  }
  return Formula(std::move(node));
}

Formula Formula::var(int index) {
  if (index < 1) throw std::invalid_argument("variable index must be >= 1");
  return make(Op::Var, index, {}, {});
}

Formula Formula::bottom() { return make(Op::Bottom, 0, {}, {}); }

Formula Formula::conj(Formula left, Formula right) {
  return make(Op::And, 0, std::move(left), std::move(right));
}

Formula Formula::disj(Formula left, Formula right) {
  return make(Op::Or, 0, std::move(left), std::move(right));
}

Formula Formula::imp(Formula left, Formula right) {
  return make(Op::Imp, 0, std::move(left), std::move(right));
}

Formula Formula::neg(Formula operand) {
  return imp(std::move(operand), bottom());
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  Formula run() {
    Formula f = parse_imp();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input at position " + std::to_string(pos_), pos_);
    return f;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool try_consume(const char* token) {
    skip_ws();
    std::size_t len = std::char_traits<char>::length(token);
    if (text_.compare(pos_, len, token) == 0) {
      pos_ += len;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at position " + std::to_string(pos_), pos_);
  }

  Formula parse_imp() {
    Formula lhs = parse_or();
    if (try_consume("->")) return Formula::imp(std::move(lhs), parse_imp());
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (true) {
      skip_ws();
      // '|' but not the start of '|-' (sequent separator handled elsewhere).
      if (pos_ < text_.size() && text_[pos_] == '|' &&
          (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '-')) {
        ++pos_;
        f = Formula::disj(std::move(f), parse_and());
      } else {
        return f;
      }
    }
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (try_consume("&")) f = Formula::conj(std::move(f), parse_unary());
    return f;
  }

  Formula parse_unary() {
    if (try_consume("~")) return Formula::neg(parse_unary());
    return parse_atom();
  }

  Formula parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (try_consume("(")) {
      Formula f = parse_imp();
      if (!try_consume(")")) fail("expected ')'");
      return f;
    }
    if (try_consume("false")) return Formula::bottom();
    if (text_[pos_] == 'P') {
      std::size_t start = ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == start) fail("expected digits after 'P'");
      long long index = 0;
      for (std::size_t i = start; i < pos_; ++i) {
        index = index * 10 + (text_[i] - '0');
        if (index > 1000000000) fail("variable index too large");
      }
      if (index == 0) fail("variable index must be >= 1");
      return Formula::var(static_cast<int>(index));
    }
    fail(std::string("unexpected character '") + text_[pos_] + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

void collect_indices(const Formula& f, std::set<int>& out) {
  if (f.op() == Op::Var) {
    out.insert(f.var_index());
  } else if (!f.is_atomic()) {
    collect_indices(f.left(), out);
    collect_indices(f.right(), out);
  }
}

Formula rename_rec(const Formula& f, const std::unordered_map<int, int>& map) {
  switch (f.op()) {
    case Op::Var: {
      auto it = map.find(f.var_index());
      return it == map.end() ? f : Formula::var(it->second);
    }
    case Op::Bottom:
      return f;
    case Op::And:
      return Formula::conj(rename_rec(f.left(), map), rename_rec(f.right(), map));
    case Op::Or:
      return Formula::disj(rename_rec(f.left(), map), rename_rec(f.right(), map));
    default:
      return Formula::imp(rename_rec(f.left(), map), rename_rec(f.right(), map));
  }
}

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(text).run(); }

Formula rename_variables(const Formula& f, const std::unordered_map<int, int>& map) {
  std::set<int> occurring;
  collect_indices(f, occurring);
  std::set<int> images;
  for (int i : occurring) {
    auto it = map.find(i);
    int image = it == map.end() ? i : it->second;
    if (image < 1) throw std::invalid_argument("renamed index must be >= 1");
    if (!images.insert(image).second)
      throw std::invalid_argument("variable renaming is not injective");
  }
  return rename_rec(f, map);
}

}  // namespace ipl
