#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <unordered_map>

#include "ipl/rng.hpp"
#include "ipl/search.hpp"
#include "support/random_terms.hpp"

using namespace ipl;

namespace {

// Deterministic fake model keyed by sequent text; everything else 0.5.
class TableValue : public ValueFunction {
 public:
  TableValue(std::initializer_list<std::pair<std::string, double>> entries) {
    for (const auto& [k, v] : entries) table_[k] = v;
  }
  double evaluate(const Sequent& s) const override {
    auto it = table_.find(s.text());
    return it == table_.end() ? 0.5 : it->second;
  }

 private:
  std::unordered_map<std::string, double> table_;
};

class CountingValue : public ValueFunction {
 public:
  explicit CountingValue(const ValueFunction& inner) : inner_(&inner) {}
  double evaluate(const Sequent& s) const override {
    ++calls_;
    texts_.insert(s.text());
    return inner_->evaluate(s);
  }
  mutable std::int64_t calls_ = 0;
  mutable std::set<std::string> texts_;

 private:
  const ValueFunction* inner_;
};

Policy follow_decide_policy() {
  // Optimal-for-the-test policy: follow a fresh decide() proof of the chosen
  // sequent one rule at a time.
  return [](const State& s) -> std::optional<Action> {
    if (s.empty()) return std::nullopt;
    auto res = decide(s.open.front(), 1000000);
    if (res.verdict != Verdict::Provable) return std::nullopt;
    return Action{0, res.proof->rule};
  };
}

}  // namespace

TEST_CASE("transition basics") {
  State start = State::single(Sequent({}, parse_formula("P1 -> P1")));
  State mid = transition(start, {0, {RuleId::ImpRight, RuleInstance::kNoPrincipal}});
  REQUIRE(mid.open.size() == 1);
  CHECK(mid.open[0] == Sequent({Formula::var(1)}, Formula::var(1)));

  State done = transition(mid, {0, {RuleId::Init, 0}});
  CHECK(done.empty());

  State two = transition(State::single(Sequent({}, parse_formula("P1 & P2"))),
                         {0, {RuleId::AndRight, RuleInstance::kNoPrincipal}});
  CHECK(two.open.size() == 2);
}

TEST_CASE("reward") {
  CHECK(reward(State{}) == 1.0);
  CHECK(reward(State::single(Sequent({}, Formula::var(1)))) == 0.0);
  CHECK(reward(State::single(Sequent({Formula::var(1)}, Formula::var(1)))) == 0.0);
}

TEST_CASE("discounted_return") {
  CHECK(discounted_return(0.95, 0) == 1.0);
  CHECK(discounted_return(0.95, 1) == 0.95);
  CHECK(discounted_return(0.95, 2) == doctest::Approx(0.9025).epsilon(1e-12));
}

TEST_CASE("run_episode proves P1 -> P1 in two steps") {
  SearchConfig cfg;
  Episode ep = run_episode(State::single(Sequent({}, parse_formula("P1 -> P1"))),
                           make_naive_greedy_policy(), cfg);
  CHECK(ep.outcome == EpisodeOutcome::Proved);
  CHECK(ep.steps == 2);
  CHECK(ep.ret == doctest::Approx(0.9025).epsilon(1e-12));
  REQUIRE(ep.proof);
  CHECK(check_proof(*ep.proof, Sequent({}, parse_formula("P1 -> P1"))).ok);
}

TEST_CASE("run_episode swap-conjunction with a decide-following policy") {
  Sequent goal({}, parse_formula("P1 & P2 -> P2 & P1"));
  SearchConfig cfg;
  Episode ep = run_episode(State::single(goal), follow_decide_policy(), cfg);
  CHECK(ep.outcome == EpisodeOutcome::Proved);
  CHECK(ep.steps == 5);
  CHECK(ep.ret == doctest::Approx(std::pow(0.95, 5)).epsilon(1e-12));
  REQUIRE(ep.proof);
  CHECK(check_proof(*ep.proof, goal).ok);
}

TEST_CASE("run_episode gets stuck on a dead end") {
  SearchConfig cfg;
  Episode ep = run_episode(State::single(Sequent({Formula::var(1)}, Formula::var(2))),
                           make_naive_greedy_policy(), cfg);
  CHECK(ep.outcome == EpisodeOutcome::Stuck);
  CHECK(ep.ret == 0.0);
}

TEST_CASE("run_episode rejects backtracking configs") {
  SearchConfig cfg;
  cfg.backtracking = true;
  CHECK_THROWS_AS(run_episode(State{}, make_naive_greedy_policy(), cfg),
                  std::invalid_argument);
}

TEST_CASE("state_value is a product with empty-state value 1") {
  TableValue model{{"|- P1", 0.5}, {"|- P2", 0.4}};
  ValueCache cache(model);
  CHECK(state_value(State{}, cache) == 1.0);
  CHECK(state_value(State::single(Sequent({}, Formula::var(1))), cache) == 0.5);
  State both({Sequent({}, Formula::var(1)), Sequent({}, Formula::var(2))});
  CHECK(state_value(both, cache) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("naive_greedy_policy minimizes total next-state length") {
  State s = State::single(Sequent({}, parse_formula("P1 | (P2 & P3)")));
  auto action = naive_greedy_policy(s);
  REQUIRE(action);
  CHECK(action->rule.rule_id == RuleId::OrRight1);  // successor length 1 beats 3

  State axiom = State::single(Sequent({Formula::var(1)}, Formula::var(1)));
  auto init = naive_greedy_policy(axiom);
  REQUIRE(init);
  CHECK(init->rule.rule_id == RuleId::Init);

  CHECK_FALSE(naive_greedy_policy(
      State::single(Sequent({Formula::var(1)}, Formula::var(2)))));
}

TEST_CASE("value_policy takes the argmax over successor values") {
  TableValue model{{"|- P1", 0.9}, {"|- P2", 0.1}};
  ValueCache cache(model);
  State s = State::single(Sequent({}, parse_formula("P1 | P2")));
  auto action = value_policy(s, cache);
  REQUIRE(action);
  CHECK(action->rule.rule_id == RuleId::OrRight1);
}

TEST_CASE("value_policy argmax is invariant under positive scaling") {
  // Successor sets of equal cardinality: scaling every per-sequent value by
  // 0.5 scales every successor product identically.
  TableValue model{{"|- P1", 0.8}, {"|- P2", 0.6}, {"|- P3", 0.2}};
  TableValue scaled{{"|- P1", 0.4}, {"|- P2", 0.3}, {"|- P3", 0.1}};
  State s = State::single(Sequent({}, parse_formula("P1 | P2 | P3")));
  ValueCache c1(model), c2(scaled);
  auto a1 = value_policy(s, c1);
  auto a2 = value_policy(s, c2);
  REQUIRE(a1);
  REQUIRE(a2);
  CHECK(a1->rule == a2->rule);
}

TEST_CASE("value_policy picks axioms regardless of the model") {
  TableValue model{};  // everything 0.5
  ValueCache cache(model);
  State s = State::single(Sequent({Formula::var(1)}, Formula::var(1)));
  auto action = value_policy(s, cache);
  REQUIRE(action);
  CHECK(action->rule.rule_id == RuleId::Init);  // empty successor has value 1
}

TEST_CASE("value cache evaluates each distinct sequent at most once") {
  LengthHeuristicValue heuristic;
  CountingValue counting(heuristic);
  Sequent goal({}, parse_formula("(P1 -> P2) -> (P1 & P1 -> P2 & P2)"));
  SearchConfig cfg;
  cfg.backtracking = true;
  GreedyDfsResult res = greedy_dfs(goal, counting, cfg);
  CHECK(res.proved);
  CHECK(counting.calls_ == static_cast<std::int64_t>(counting.texts_.size()));
}

TEST_CASE("greedy_dfs proves P1 -> P1 within three expansions") {
  LengthHeuristicValue model;
  SearchConfig cfg;
  cfg.backtracking = true;
  GreedyDfsResult res = greedy_dfs(Sequent({}, parse_formula("P1 -> P1")), model, cfg);
  CHECK(res.proved);
  CHECK(res.steps <= 3);
  REQUIRE(res.proof);
  CHECK(check_proof(*res.proof, Sequent({}, parse_formula("P1 -> P1"))).ok);
}

TEST_CASE("greedy_dfs exhausts Peirce's law") {
  LengthHeuristicValue model;
  SearchConfig cfg;
  cfg.backtracking = true;
  cfg.step_limit = 1000000;
  GreedyDfsResult res =
      greedy_dfs(Sequent({}, parse_formula("((P1 -> P2) -> P1) -> P1")), model, cfg);
  CHECK_FALSE(res.proved);
  CHECK(res.failure == DfsFailure::Exhausted);
}

TEST_CASE("greedy_dfs honors step limits") {
  LengthHeuristicValue model;
  SearchConfig cfg;
  cfg.backtracking = true;
  cfg.step_limit = 1;
  GreedyDfsResult res =
      greedy_dfs(Sequent({}, parse_formula("((P1 -> P2) -> P1) -> P1")), model, cfg);
  CHECK_FALSE(res.proved);
  CHECK(res.failure == DfsFailure::BudgetExceeded);
  CHECK(res.steps <= 1);
}

TEST_CASE("greedy_dfs with full budget agrees with decide on random goals") {
  Rng rng(47);
  LengthHeuristicValue model;
  for (int i = 0; i < 400; ++i) {
    Sequent goal({}, testing::random_formula_default(rng, 11, 2));
    SearchConfig cfg;
    cfg.backtracking = true;
    cfg.step_limit = 2000000;
    GreedyDfsResult res = greedy_dfs(goal, model, cfg);
    REQUIRE(res.failure != DfsFailure::BudgetExceeded);
    auto expected = decide(goal, 2000000);
    REQUIRE(expected.verdict != Verdict::BudgetExceeded);
    CHECK(res.proved == (expected.verdict == Verdict::Provable));
    if (res.proved) CHECK(check_proof(*res.proof, goal).ok);
  }
}

TEST_CASE("return factorization composes across independent sequents") {
  Rng rng(53);
  SearchConfig cfg;
  int composed = 0;
  for (int i = 0; i < 200; ++i) {
    Sequent a({}, testing::random_formula_default(rng, 9, 2));
    Sequent b({}, testing::random_formula_default(rng, 9, 2));
    Episode ea = run_episode(State::single(a), make_naive_greedy_policy(), cfg);
    Episode eb = run_episode(State::single(b), make_naive_greedy_policy(), cfg);
    if (ea.outcome != EpisodeOutcome::Proved || eb.outcome != EpisodeOutcome::Proved)
      continue;
    Episode both = run_episode(State({a, b}), make_naive_greedy_policy(), cfg);
    REQUIRE(both.outcome == EpisodeOutcome::Proved);
    CHECK(both.steps == ea.steps + eb.steps);
    CHECK(both.ret ==
          doctest::Approx(discounted_return(cfg.gamma, ea.steps + eb.steps))
              .epsilon(1e-12));
    ++composed;
  }
  CHECK(composed > 20);
}

TEST_CASE("identical configuration yields identical traces") {
  Sequent goal({}, parse_formula("(P1 | P2) & P1 -> P1 & P1"));
  SearchConfig cfg;
  Episode a = run_episode(State::single(goal), make_naive_greedy_policy(), cfg);
  Episode b = run_episode(State::single(goal), make_naive_greedy_policy(), cfg);
  REQUIRE(a.actions.size() == b.actions.size());
  for (std::size_t i = 0; i < a.actions.size(); ++i) CHECK(a.actions[i] == b.actions[i]);
  CHECK(a.ret == b.ret);
}
