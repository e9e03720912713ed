#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "ipl/sequent.hpp"

namespace ipl::testing {

// Naive LJ over set-based antecedents with loop checking on the search path:
// the figure-style rule set where ->-Left keeps its principal implication in
// the first premise. Complete and terminating for IPL; serves as the
// agreement oracle for the LJT decision procedure. Verdicts are cached
// across calls (refutations only when no loop pruning occurred under them).
class LjOracle {
 public:
  bool provable(const Sequent& goal);
  std::size_t cache_size() const { return proved_.size() + refuted_.size(); }

 private:
  struct SetSequent {
    std::vector<Formula> ants;  // sorted, deduplicated
    Formula goal;
    std::string key;
  };

  static SetSequent make(std::vector<Formula> ants, Formula goal);
  bool prove(const SetSequent& s, bool& pure);

  std::unordered_set<std::string> proved_;
  std::unordered_set<std::string> refuted_;
  std::unordered_set<std::string> path_;
};

}  // namespace ipl::testing
