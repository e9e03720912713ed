#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ipl/sequent.hpp"

namespace ipl {

// LJT rule set: LJ with ->-Left replaced by the four contraction-free rules.
// Enumeration order below is also the canonical action order.
enum class RuleId : std::uint8_t {
  Init,
  BotLeft,
  AndLeft,
  AndRight,
  OrLeft,
  OrRight1,
  OrRight2,
  ImpRight,
  ImpLeftAtom,
  ImpLeftAnd,
  ImpLeftOr,
  ImpLeftImp,
};

const char* rule_name(RuleId id);
std::optional<RuleId> rule_from_name(const std::string& name);

struct RuleInstance {
  RuleId rule_id;
  // Position of the principal antecedent in canonical order; npos for rules
  // without one (right rules).
  static constexpr std::size_t kNoPrincipal = static_cast<std::size_t>(-1);
  std::size_t principal = kNoPrincipal;

  bool has_principal() const { return principal != kNoPrincipal; }
  bool operator==(const RuleInstance& other) const {
    return rule_id == other.rule_id && principal == other.principal;
  }
  std::string to_string() const;
};

struct ProofTree {
  Sequent sequent;
  RuleInstance rule;
  std::vector<std::shared_ptr<const ProofTree>> children;
};
using ProofTreePtr = std::shared_ptr<const ProofTree>;

// All LJT rule instances applicable to s, in canonical order (rule id, then
// principal position ascending). Duplicate antecedent formulas yield one
// instance at their first position. Empty iff s is a dead end.
std::vector<RuleInstance> enumerate_actions(const Sequent& s);

// Premise sequents of rule r applied to s, top-to-bottom left-to-right;
// empty for axioms. Throws std::invalid_argument when r is not applicable.
std::vector<Sequent> apply_rule(const Sequent& s, const RuleInstance& r);

// True iff Init or Bottom-Left closes s directly.
bool is_one_step_provable(const Sequent& s);

// Per-formula termination weights over antecedents and consequent, sorted
// ascending. Every rule application strictly decreases this multiset in the
// Dershowitz-Manna order.
std::vector<std::int64_t> weight_multiset(const Sequent& s);

// True iff `after` < `before` in the Dershowitz-Manna multiset order
// (both sorted ascending).
bool multiset_strictly_less(const std::vector<std::int64_t>& after,
                            const std::vector<std::int64_t>& before);

enum class Verdict { Provable, Unprovable, BudgetExceeded };

struct DecideResult {
  Verdict verdict;
  ProofTreePtr proof;       // set iff Provable
  std::int64_t visited = 0; // sequents expanded during the search
};

// Exhaustive proof search over LJT. Caches verdicts across decide() calls on
// the same instance; both Provable and Unprovable are absolute, so reuse is
// sound. The per-call budget caps fresh expansions.
class Decider {
 public:
  DecideResult decide(const Sequent& goal, std::int64_t budget);
  std::size_t cache_size() const { return cache_.size(); }

 private:
  struct Entry {
    bool provable;
    ProofTreePtr proof;
  };
  enum class Outcome { Proved, Refuted, OutOfBudget };
  Outcome search(const Sequent& s, ProofTreePtr& proof);

  std::unordered_map<std::string, Entry> cache_;
  std::int64_t remaining_ = 0;
  std::int64_t visited_ = 0;
};

// One-shot decision procedure (fresh cache per call).
DecideResult decide(const Sequent& goal, std::int64_t budget);

struct CheckResult {
  bool ok;
  std::string node_path;  // e.g. "0.1" (child indices from the root)
  std::string reason;
};

// Independent certificate check: the root matches `goal`, every node's
// children equal apply_rule(node.sequent, node.rule), and leaves are axioms.
CheckResult check_proof(const ProofTree& t, const Sequent& goal);

// Nested text record per node: `(rule_name principal? [sequent] children...)`.
// Round-trips bit-exactly.
std::string serialize_proof(const ProofTree& t);
ProofTreePtr parse_proof(const std::string& text);

}  // namespace ipl
