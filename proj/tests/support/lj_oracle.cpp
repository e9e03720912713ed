#include "lj_oracle.hpp"

#include <algorithm>

namespace ipl::testing {

LjOracle::SetSequent LjOracle::make(std::vector<Formula> ants, Formula goal) {
  std::sort(ants.begin(), ants.end());
  ants.erase(std::unique(ants.begin(), ants.end()), ants.end());
  std::string key;
  for (const Formula& a : ants) {
    key += a.text();
    key += ";";
  }
  key += ">";
  key += goal.text();
  return {std::move(ants), std::move(goal), std::move(key)};
}

bool LjOracle::provable(const Sequent& goal) {
  SetSequent s = make(goal.antecedents(), goal.consequent());
  bool pure = true;
  return prove(s, pure);
}

bool LjOracle::prove(const SetSequent& s, bool& pure) {
  // Axioms: Init with an arbitrary principal formula, and Bottom-Left.
  for (const Formula& a : s.ants) {
    if (a == s.goal || a.op() == Op::Bottom) return true;
  }
  if (proved_.count(s.key)) return true;
  if (refuted_.count(s.key)) return false;
  if (path_.count(s.key)) {
    pure = false;  // pruned by the loop check; failure is path-dependent
    return false;
  }
  path_.insert(s.key);
  bool my_pure = true;

  auto attempt = [&](const std::vector<SetSequent>& premises) {
    bool branch_pure = true;
    for (const SetSequent& p : premises) {
      if (!prove(p, branch_pure)) {
        my_pure = my_pure && branch_pure;
        return false;
      }
    }
    return true;
  };
  auto minus_plus = [&](const Formula& remove, std::vector<Formula> add,
                        const Formula& goal) {
    std::vector<Formula> ants;
    ants.reserve(s.ants.size() + add.size());
    for (const Formula& a : s.ants)
      if (!(a == remove)) ants.push_back(a);
    for (Formula& f : add) ants.push_back(std::move(f));
    return make(std::move(ants), goal);
  };
  auto proved = [&]() {
    path_.erase(s.key);
    proved_.insert(s.key);
    return true;
  };

  switch (s.goal.op()) {
    case Op::And:
      if (attempt({make(s.ants, s.goal.left()), make(s.ants, s.goal.right())}))
        return proved();
      break;
    case Op::Or:
      if (attempt({make(s.ants, s.goal.left())})) return proved();
      if (attempt({make(s.ants, s.goal.right())})) return proved();
      break;
    case Op::Imp: {
      std::vector<Formula> ext(s.ants);
      ext.push_back(s.goal.left());
      if (attempt({make(std::move(ext), s.goal.right())})) return proved();
      break;
    }
    default:
      break;
  }

  for (const Formula& a : s.ants) {
    switch (a.op()) {
      case Op::And:
        if (attempt({minus_plus(a, {a.left(), a.right()}, s.goal)})) return proved();
        break;
      case Op::Or:
        if (attempt({minus_plus(a, {a.left()}, s.goal),
                     minus_plus(a, {a.right()}, s.goal)}))
          return proved();
        break;
      case Op::Imp:
        // ->-Left keeps the implication in its first premise.
        if (attempt({make(s.ants, a.left()), minus_plus(a, {a.right()}, s.goal)}))
          return proved();
        break;
      default:
        break;
    }
  }

  path_.erase(s.key);
  if (my_pure) refuted_.insert(s.key);
  pure = pure && my_pure;
  return false;
}

}  // namespace ipl::testing
