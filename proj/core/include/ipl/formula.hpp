#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace ipl {

enum class Op : std::uint8_t { Var, Bottom, And, Or, Imp };

// Reported for malformed formula text; `position` is a 0-based byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {
struct FormulaNode;
}

// Immutable formula tree with shared subterms. Negation has no constructor
// of its own: neg(a) builds imp(a, bottom()). Every node carries its length,
// termination weight, structural hash, and minimal-parentheses text, so
// equality and canonical ordering are cheap.
class Formula {
 public:
  Formula() = default;  // null; only valid as a container placeholder

  static Formula var(int index);
  static Formula bottom();
  static Formula conj(Formula left, Formula right);
  static Formula disj(Formula left, Formula right);
  static Formula imp(Formula left, Formula right);
  static Formula neg(Formula operand);

  bool valid() const { return node_ != nullptr; }
  Op op() const;
  int var_index() const;
  const Formula& left() const;
  const Formula& right() const;

  bool is_atomic() const { return op() == Op::Var || op() == Op::Bottom; }

  // Count of variable and connective occurrences (Var, Bottom, And, Or, Imp
  // all count 1 per occurrence).
  int length() const;

  // Termination measure: atoms weigh 1, Or/Imp add 1, And adds 2.
  std::int64_t weight() const;

  std::size_t hash() const;

  // Minimal-parentheses serialization; parsing it back yields an equal tree.
  const std::string& text() const;

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  // Canonical order: by length, then by serialized text.
  bool operator<(const Formula& other) const;

 private:
  explicit Formula(std::shared_ptr<const detail::FormulaNode> node)
      : node_(std::move(node)) {}
  static Formula make(Op op, int var_index, Formula lhs, Formula rhs);

  std::shared_ptr<const detail::FormulaNode> node_;
};

namespace detail {
struct FormulaNode {
  Op op;
  int var_index;
  Formula lhs, rhs;
  int length;
  std::int64_t weight;
  std::size_t hash;
  std::string text;
};
}  // namespace detail

inline Op Formula::op() const { return node_->op; }
inline int Formula::length() const { return node_->length; }
inline std::int64_t Formula::weight() const { return node_->weight; }
inline std::size_t Formula::hash() const { return node_->hash; }
inline const std::string& Formula::text() const { return node_->text; }

inline const Formula& Formula::left() const {
  if (is_atomic()) throw std::logic_error("left() on atomic formula");
  return node_->lhs;
}

inline const Formula& Formula::right() const {
  if (is_atomic()) throw std::logic_error("right() on atomic formula");
  return node_->rhs;
}

inline bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  return node_->hash == other.node_->hash && node_->length == other.node_->length &&
         node_->text == other.node_->text;
}

inline bool Formula::operator<(const Formula& other) const {
  if (node_ == other.node_) return false;
  if (node_->length != other.node_->length)
    return node_->length < other.node_->length;
  return node_->text < other.node_->text;
}

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

Formula parse_formula(const std::string& text);

inline const std::string& print_formula(const Formula& f) { return f.text(); }

inline int formula_length(const Formula& f) { return f.length(); }

// Replaces Var i with Var map[i]; indices absent from the map stay put.
// Throws std::invalid_argument when the effective map is not injective on
// the indices occurring in f.
Formula rename_variables(const Formula& f,
                         const std::unordered_map<int, int>& map);

}  // namespace ipl
