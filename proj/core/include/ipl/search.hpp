#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ipl/calculus.hpp"

namespace ipl {

// Multiset of open sequents, kept sorted by canonical serialization.
// The empty state means the proof is complete.
struct State {
  std::vector<Sequent> open;

  State() = default;
  explicit State(std::vector<Sequent> sequents);
  static State single(Sequent s) { return State({std::move(s)}); }

  bool empty() const { return open.empty(); }
  bool operator==(const State& other) const { return open == other.open; }
};

// Application of a rule instance to one open sequent.
struct Action {
  std::size_t sequent_index;
  RuleInstance rule;
  bool operator==(const Action& other) const {
    return sequent_index == other.sequent_index && rule == other.rule;
  }
};

struct SearchConfig {
  double gamma = 0.95;
  std::int64_t step_limit = 10000;
  double time_limit_seconds = 0;  // 0 = no wall-clock limit
  bool backtracking = false;
};

// gamma^steps via square-and-multiply with a fixed operation order, so
// stored returns are recomputable bit-exactly.
double discounted_return(double gamma, std::int64_t steps);

State transition(const State& s, const Action& a);

inline double reward(const State& s) { return s.empty() ? 1.0 : 0.0; }

enum class EpisodeOutcome { Proved, Stuck, BudgetExceeded };

struct Episode {
  std::vector<State> states;    // s0 .. sn
  std::vector<Action> actions;  // a0 .. a(n-1)
  EpisodeOutcome outcome;
  std::int64_t steps = 0;  // actions taken
  double ret = 0.0;        // gamma^steps when proved, else 0
  ProofTreePtr proof;      // set when proved
};

using Policy = std::function<std::optional<Action>(const State&)>;

// Pure policy rollout without backtracking. Throws std::invalid_argument if
// cfg.backtracking is set.
Episode run_episode(State start, const Policy& policy, const SearchConfig& cfg);

// Evaluates single sequents in [0,1]. evaluate_batch exists so a search can
// request every unseen sequent of a step in one call.
class ValueFunction {
 public:
  virtual ~ValueFunction() = default;
  virtual double evaluate(const Sequent& s) const = 0;
  virtual std::vector<double> evaluate_batch(const std::vector<Sequent>& batch) const;
};

// The untrained heuristic: value gamma^length, so higher value means shorter.
// Greedy search guided by it reproduces the minimize-total-length baseline.
class LengthHeuristicValue : public ValueFunction {
 public:
  explicit LengthHeuristicValue(double gamma = 0.95) : gamma_(gamma) {}
  double evaluate(const Sequent& s) const override {
    return discounted_return(gamma_, sequent_length(s));
  }

 private:
  double gamma_;
};

// Per-proving-call cache over canonical sequent serializations. Values are
// clamped to [0,1] on store; each distinct sequent is evaluated at most once.
class ValueCache {
 public:
  explicit ValueCache(const ValueFunction& fn) : fn_(&fn) {}

  void prime(const std::vector<Sequent>& sequents);
  double value(const Sequent& s);
  std::int64_t evaluations() const { return evaluations_; }

 private:
  const ValueFunction* fn_;
  std::unordered_map<std::string, double> cache_;
  std::int64_t evaluations_ = 0;
};

// Product of per-sequent values; 1 for the empty state.
double state_value(const State& s, ValueCache& cache);
double state_value(const State& s, const ValueFunction& fn);

// Action minimizing the total length of the next state; ties broken by
// canonical action order. nullopt iff no action is available.
std::optional<Action> naive_greedy_policy(const State& s);

// Action maximizing the value of the next state (ties canonical). All unseen
// successor sequents are evaluated through the cache in one batch.
std::optional<Action> value_policy(const State& s, ValueCache& cache);

Policy make_naive_greedy_policy();
// The cache is shared across the steps of the episode(s) the policy runs.
Policy make_value_policy(std::shared_ptr<ValueCache> cache);

enum class DfsFailure { None, Exhausted, BudgetExceeded };

struct GreedyDfsResult {
  bool proved = false;
  ProofTreePtr proof;
  std::int64_t steps = 0;  // expanded states
  DfsFailure failure = DfsFailure::None;
};

// Backtracking depth-first search: expands only the lowest-valued open
// sequent, tries its actions in descending successor-state value, and
// backtracks from dead ends. Requires cfg.backtracking.
GreedyDfsResult greedy_dfs(const Sequent& goal, const ValueFunction& model,
                           const SearchConfig& cfg);
GreedyDfsResult greedy_dfs(const Sequent& goal, ValueCache& cache,
                           const SearchConfig& cfg);

}  // namespace ipl
