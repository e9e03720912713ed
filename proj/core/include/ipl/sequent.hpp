#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ipl/formula.hpp"

namespace ipl {

// A judgment "antecedents |- consequent". Antecedents form a multiset kept
// in canonical order (by formula length, then serialized text; duplicates
// preserved), so equal multisets serialize identically. Copies are cheap.
class Sequent {
 public:
  Sequent() = default;
  Sequent(std::vector<Formula> antecedents, Formula consequent);

  bool valid() const { return data_ != nullptr; }
  const std::vector<Formula>& antecedents() const { return data_->antecedents; }
  const Formula& consequent() const { return data_->consequent; }

  // Canonical serialization: "A1, A2 |- G", or "|- G" with no antecedents.
  const std::string& text() const { return data_->text; }

  int length() const { return data_->length; }

  bool operator==(const Sequent& other) const;
  bool operator!=(const Sequent& other) const { return !(*this == other); }
  bool operator<(const Sequent& other) const { return text() < other.text(); }

  // New sequent with the antecedent at `position` removed and `added`
  // appended, re-canonicalized.
  Sequent replace_antecedent(std::size_t position,
                             const std::vector<Formula>& added) const;

  Sequent with_consequent(Formula consequent) const;

  Sequent rename(const std::unordered_map<int, int>& map) const;

 private:
  struct Data {
    std::vector<Formula> antecedents;
    Formula consequent;
    std::string text;
    int length;
  };
  std::shared_ptr<const Data> data_;
};

int sequent_length(const Sequent& s);

Sequent parse_sequent(const std::string& text);

inline const std::string& print_sequent(const Sequent& s) { return s.text(); }

struct SequentHash {
  std::size_t operator()(const Sequent& s) const {
    return std::hash<std::string>()(s.text());
  }
};

}  // namespace ipl
