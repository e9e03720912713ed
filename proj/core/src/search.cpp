#include "ipl/search.hpp"

#include <algorithm>
#include <chrono>

namespace ipl {

namespace {

using Clock = std::chrono::steady_clock;

Clock::time_point deadline_for(const SearchConfig& cfg) {
  if (cfg.time_limit_seconds <= 0) return Clock::time_point::max();
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(
                            std::chrono::duration<double>(cfg.time_limit_seconds));
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// Incremental proof assembly: every open sequent carries the node that its
// eventual subproof must fill.
struct PendingNode {
  Sequent sequent;
  RuleInstance rule;
  std::vector<std::shared_ptr<PendingNode>> children;
  bool expanded = false;
};
using PendingPtr = std::shared_ptr<PendingNode>;

ProofTreePtr freeze(const PendingNode& node) {
  auto out = std::make_shared<ProofTree>();
  out->sequent = node.sequent;
  out->rule = node.rule;
  out->children.reserve(node.children.size());
  for (const auto& c : node.children) out->children.push_back(freeze(*c));
  return out;
}

// Mirrors State's canonical multiset order while tracking pending nodes.
struct ProofAssembler {
  std::vector<PendingPtr> open;
  PendingPtr root;

  void start(const Sequent& goal) {
    root = std::make_shared<PendingNode>();
    root->sequent = goal;
    open = {root};
  }

  void apply(const Action& a, const std::vector<Sequent>& premises) {
    PendingPtr node = open[a.sequent_index];
    node->rule = a.rule;
    node->expanded = true;
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(a.sequent_index));
    for (const Sequent& p : premises) {
      auto child = std::make_shared<PendingNode>();
      child->sequent = p;
      node->children.push_back(child);
      auto at = std::upper_bound(
          open.begin(), open.end(), child,
          [](const PendingPtr& x, const PendingPtr& y) {
            return x->sequent.text() < y->sequent.text();
          });
      open.insert(at, std::move(child));
    }
  }
};

}  // namespace

State::State(std::vector<Sequent> sequents) : open(std::move(sequents)) {
  std::sort(open.begin(), open.end());
}

double discounted_return(double gamma, std::int64_t steps) {
  double result = 1.0;
  double base = gamma;
  std::uint64_t n = static_cast<std::uint64_t>(steps);
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

State transition(const State& s, const Action& a) {
  if (a.sequent_index >= s.open.size())
    throw std::invalid_argument("action sequent index out of range");
  std::vector<Sequent> premises = apply_rule(s.open[a.sequent_index], a.rule);
  std::vector<Sequent> next;
  next.reserve(s.open.size() - 1 + premises.size());
  for (std::size_t i = 0; i < s.open.size(); ++i) {
    if (i != a.sequent_index) next.push_back(s.open[i]);
  }
  next.insert(next.end(), premises.begin(), premises.end());
  return State(std::move(next));
}

Episode run_episode(State start, const Policy& policy, const SearchConfig& cfg) {
  if (cfg.backtracking)
    throw std::invalid_argument("run_episode is a pure rollout; disable backtracking");
  const auto deadline = deadline_for(cfg);

  Episode ep;
  ProofAssembler assembler;
  std::vector<PendingPtr> roots;
  for (const Sequent& s : start.open) {
    auto node = std::make_shared<PendingNode>();
    node->sequent = s;
    roots.push_back(node);
    assembler.open.push_back(node);
  }

  ep.states.push_back(start);
  State current = std::move(start);
  while (true) {
    if (current.empty()) {
      ep.outcome = EpisodeOutcome::Proved;
      ep.steps = static_cast<std::int64_t>(ep.actions.size());
      ep.ret = discounted_return(cfg.gamma, ep.steps);
      if (roots.size() == 1) ep.proof = freeze(*roots.front());
      return ep;
    }
    if (static_cast<std::int64_t>(ep.actions.size()) >= cfg.step_limit ||
        Clock::now() > deadline) {
      ep.outcome = EpisodeOutcome::BudgetExceeded;
      ep.steps = static_cast<std::int64_t>(ep.actions.size());
      return ep;
    }
    std::optional<Action> a = policy(current);
    if (!a) {
      ep.outcome = EpisodeOutcome::Stuck;
      ep.steps = static_cast<std::int64_t>(ep.actions.size());
      return ep;
    }
    std::vector<Sequent> premises = apply_rule(current.open[a->sequent_index], a->rule);
    assembler.apply(*a, premises);
    current = transition(current, *a);
    ep.actions.push_back(*a);
    ep.states.push_back(current);
  }
}

std::vector<double> ValueFunction::evaluate_batch(const std::vector<Sequent>& batch) const {
  std::vector<double> out;
  out.reserve(batch.size());
  for (const Sequent& s : batch) out.push_back(evaluate(s));
  return out;
}

void ValueCache::prime(const std::vector<Sequent>& sequents) {
  std::vector<Sequent> unseen;
  for (const Sequent& s : sequents) {
    if (cache_.find(s.text()) == cache_.end()) {
      cache_.emplace(s.text(), -1.0);  // reserve so duplicates batch once
      unseen.push_back(s);
    }
  }
  if (unseen.empty()) return;
  std::vector<double> values = fn_->evaluate_batch(unseen);
  evaluations_ += static_cast<std::int64_t>(unseen.size());
  for (std::size_t i = 0; i < unseen.size(); ++i)
    cache_[unseen[i].text()] = clamp01(values[i]);
}

double ValueCache::value(const Sequent& s) {
  auto it = cache_.find(s.text());
  if (it != cache_.end() && it->second >= 0.0) return it->second;
  double v = clamp01(fn_->evaluate(s));
  ++evaluations_;
  cache_[s.text()] = v;
  return v;
}

double state_value(const State& s, ValueCache& cache) {
  double v = 1.0;
  for (const Sequent& p : s.open) v *= cache.value(p);
  return v;
}

double state_value(const State& s, const ValueFunction& fn) {
  double v = 1.0;
  for (const Sequent& p : s.open) v *= clamp01(fn.evaluate(p));
  return v;
}

namespace {

struct Candidate {
  Action action;
  std::vector<Sequent> premises;
};

std::vector<Candidate> all_candidates(const State& s) {
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < s.open.size(); ++i) {
    for (const RuleInstance& r : enumerate_actions(s.open[i]))
      out.push_back({Action{i, r}, apply_rule(s.open[i], r)});
  }
  return out;
}

}  // namespace

std::optional<Action> naive_greedy_policy(const State& s) {
  std::vector<Candidate> candidates = all_candidates(s);
  if (candidates.empty()) return std::nullopt;
  std::int64_t total = 0;
  for (const Sequent& p : s.open) total += p.length();
  std::optional<Action> best;
  std::int64_t best_length = 0;
  for (const Candidate& c : candidates) {
    std::int64_t next = total - s.open[c.action.sequent_index].length();
    for (const Sequent& p : c.premises) next += p.length();
    if (!best || next < best_length) {
      best = c.action;
      best_length = next;
    }
  }
  return best;
}

std::optional<Action> value_policy(const State& s, ValueCache& cache) {
  std::vector<Candidate> candidates = all_candidates(s);
  if (candidates.empty()) return std::nullopt;
  std::vector<Sequent> to_prime(s.open);
  for (const Candidate& c : candidates)
    to_prime.insert(to_prime.end(), c.premises.begin(), c.premises.end());
  cache.prime(to_prime);

  std::optional<Action> best;
  double best_value = -1.0;
  for (const Candidate& c : candidates) {
    double v = 1.0;
    for (std::size_t i = 0; i < s.open.size(); ++i)
      if (i != c.action.sequent_index) v *= cache.value(s.open[i]);
    for (const Sequent& p : c.premises) v *= cache.value(p);
    if (!best || v > best_value) {
      best = c.action;
      best_value = v;
    }
  }
  return best;
}

Policy make_naive_greedy_policy() {
  return [](const State& s) { return naive_greedy_policy(s); };
}

Policy make_value_policy(std::shared_ptr<ValueCache> cache) {
  return [cache](const State& s) { return value_policy(s, *cache); };
}

namespace {

struct BudgetAbort {};

class GreedyDfs {
 public:
  GreedyDfs(ValueCache& cache, const SearchConfig& cfg)
      : cache_(cache), cfg_(cfg), deadline_(deadline_for(cfg)) {}

  bool run(const State& s) {
    if (s.empty()) return true;
    if (steps_ >= cfg_.step_limit || Clock::now() > deadline_) throw BudgetAbort{};
    ++steps_;

    cache_.prime(s.open);
    std::size_t target = 0;
    double lowest = 2.0;
    for (std::size_t i = 0; i < s.open.size(); ++i) {
      double v = cache_.value(s.open[i]);
      if (v < lowest) {
        lowest = v;
        target = i;
      }
    }

    std::vector<RuleInstance> rules = enumerate_actions(s.open[target]);
    if (rules.empty()) return false;  // dead end, backtrack

    std::vector<State> successors;
    std::vector<Sequent> to_prime;
    successors.reserve(rules.size());
    for (const RuleInstance& r : rules) {
      successors.push_back(transition(s, Action{target, r}));
      const State& next = successors.back();
      to_prime.insert(to_prime.end(), next.open.begin(), next.open.end());
    }
    cache_.prime(to_prime);

    std::vector<std::size_t> order(rules.size());
    std::vector<double> values(rules.size());
    for (std::size_t i = 0; i < rules.size(); ++i) {
      order[i] = i;
      values[i] = state_value(successors[i], cache_);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return values[a] > values[b];
    });

    for (std::size_t i : order) {
      path_.push_back(Action{target, rules[i]});
      if (run(successors[i])) return true;
      path_.pop_back();
    }
    return false;
  }

  std::int64_t steps() const { return steps_; }
  const std::vector<Action>& path() const { return path_; }

 private:
  ValueCache& cache_;
  const SearchConfig& cfg_;
  Clock::time_point deadline_;
  std::int64_t steps_ = 0;
  std::vector<Action> path_;
};

}  // namespace

GreedyDfsResult greedy_dfs(const Sequent& goal, ValueCache& cache,
                           const SearchConfig& cfg) {
  if (!cfg.backtracking)
    throw std::invalid_argument("greedy_dfs requires cfg.backtracking");

  GreedyDfsResult result;
  GreedyDfs dfs(cache, cfg);
  State start = State::single(goal);
  try {
    result.proved = dfs.run(start);
  } catch (const BudgetAbort&) {
    result.steps = dfs.steps();
    result.failure = DfsFailure::BudgetExceeded;
    return result;
  }
  result.steps = dfs.steps();
  if (!result.proved) {
    result.failure = DfsFailure::Exhausted;
    return result;
  }

  // Replay the successful action path to assemble the certificate.
  ProofAssembler assembler;
  assembler.start(goal);
  State current = std::move(start);
  for (const Action& a : dfs.path()) {
    std::vector<Sequent> premises = apply_rule(current.open[a.sequent_index], a.rule);
    assembler.apply(a, premises);
    current = transition(current, a);
  }
  result.proof = freeze(*assembler.root);
  return result;
}

GreedyDfsResult greedy_dfs(const Sequent& goal, const ValueFunction& model,
                           const SearchConfig& cfg) {
  ValueCache cache(model);
  return greedy_dfs(goal, cache, cfg);
}

}  // namespace ipl
