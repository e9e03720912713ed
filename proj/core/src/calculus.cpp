#include "ipl/calculus.hpp"

#include <algorithm>
#include <cctype>

namespace ipl {

namespace {

constexpr const char* kRuleNames[] = {
    "Init",      "BotLeft",    "AndLeft",    "AndRight",
    "OrLeft",    "OrRight1",   "OrRight2",   "ImpRight",
    "ImpLeftAtom", "ImpLeftAnd", "ImpLeftOr", "ImpLeftImp",
};

bool first_occurrence(const std::vector<Formula>& ants, std::size_t i) {
  // Canonical order keeps duplicates adjacent.
  return i == 0 || !(ants[i - 1] == ants[i]);
}

// Which ImpLeft variant handles an implication antecedent, by the shape of
// its own antecedent part.
RuleId imp_left_variant(const Formula& imp) {
  switch (imp.left().op()) {
    case Op::Var:
    case Op::Bottom: return RuleId::ImpLeftAtom;
    case Op::And: return RuleId::ImpLeftAnd;
    case Op::Or: return RuleId::ImpLeftOr;
    default: return RuleId::ImpLeftImp;
  }
}

}  // namespace

const char* rule_name(RuleId id) { return kRuleNames[static_cast<int>(id)]; }

std::optional<RuleId> rule_from_name(const std::string& name) {
  for (int i = 0; i < 12; ++i) {
    if (name == kRuleNames[i]) return static_cast<RuleId>(i);
  }
  return std::nullopt;
}

std::string RuleInstance::to_string() const {
  std::string s = rule_name(rule_id);
  if (has_principal()) s += "@" + std::to_string(principal);
  return s;
}

std::vector<RuleInstance> enumerate_actions(const Sequent& s) {
  const auto& ants = s.antecedents();
  const Formula& goal = s.consequent();
  std::vector<RuleInstance> left[12];

  for (std::size_t i = 0; i < ants.size(); ++i) {
    if (!first_occurrence(ants, i)) continue;
    const Formula& a = ants[i];
    if (a == goal) left[static_cast<int>(RuleId::Init)].push_back({RuleId::Init, i});
    switch (a.op()) {
      case Op::Bottom:
        left[static_cast<int>(RuleId::BotLeft)].push_back({RuleId::BotLeft, i});
        break;
      case Op::And:
        left[static_cast<int>(RuleId::AndLeft)].push_back({RuleId::AndLeft, i});
        break;
      case Op::Or:
        left[static_cast<int>(RuleId::OrLeft)].push_back({RuleId::OrLeft, i});
        break;
      case Op::Imp: {
        RuleId variant = imp_left_variant(a);
        if (variant == RuleId::ImpLeftAtom) {
          // Side condition: the atom itself must occur as an antecedent.
          bool atom_present = false;
          for (std::size_t j = 0; j < ants.size() && !atom_present; ++j)
            atom_present = j != i && ants[j] == a.left();
          if (!atom_present) break;
        }
        left[static_cast<int>(variant)].push_back({variant, i});
        break;
      }
      default:
        break;
    }
  }

  std::vector<RuleInstance> out;
  for (int id = 0; id < 12; ++id) {
    RuleId rid = static_cast<RuleId>(id);
    if (rid == RuleId::AndRight && goal.op() == Op::And)
      out.push_back({rid, RuleInstance::kNoPrincipal});
    else if ((rid == RuleId::OrRight1 || rid == RuleId::OrRight2) && goal.op() == Op::Or)
      out.push_back({rid, RuleInstance::kNoPrincipal});
    else if (rid == RuleId::ImpRight && goal.op() == Op::Imp)
      out.push_back({rid, RuleInstance::kNoPrincipal});
    out.insert(out.end(), left[id].begin(), left[id].end());
  }
  return out;
}

std::vector<Sequent> apply_rule(const Sequent& s, const RuleInstance& r) {
  const auto& ants = s.antecedents();
  const Formula& goal = s.consequent();

  auto invalid = [&]() {
    throw std::invalid_argument("rule " + r.to_string() +
                                " is not applicable to: " + s.text());
  };
  auto principal = [&]() -> const Formula& {
    if (!r.has_principal() || r.principal >= ants.size() ||
        !first_occurrence(ants, r.principal))
      invalid();
    return ants[r.principal];
  };

  switch (r.rule_id) {
    case RuleId::Init:
      if (!(principal() == goal)) invalid();
      return {};
    case RuleId::BotLeft:
      if (principal().op() != Op::Bottom) invalid();
      return {};
    case RuleId::AndLeft: {
      const Formula& a = principal();
      if (a.op() != Op::And) invalid();
      return {s.replace_antecedent(r.principal, {a.left(), a.right()})};
    }
    case RuleId::AndRight:
      if (r.has_principal() || goal.op() != Op::And) invalid();
      return {s.with_consequent(goal.left()), s.with_consequent(goal.right())};
    case RuleId::OrLeft: {
      const Formula& a = principal();
      if (a.op() != Op::Or) invalid();
      return {s.replace_antecedent(r.principal, {a.left()}),
              s.replace_antecedent(r.principal, {a.right()})};
    }
    case RuleId::OrRight1:
      if (r.has_principal() || goal.op() != Op::Or) invalid();
      return {s.with_consequent(goal.left())};
    case RuleId::OrRight2:
      if (r.has_principal() || goal.op() != Op::Or) invalid();
      return {s.with_consequent(goal.right())};
    case RuleId::ImpRight: {
      if (r.has_principal() || goal.op() != Op::Imp) invalid();
      std::vector<Formula> ext(ants);
      ext.push_back(goal.left());
      return {Sequent(std::move(ext), goal.right())};
    }
    case RuleId::ImpLeftAtom: {
      // P->B, P, Gamma |- G  becomes  B, P, Gamma |- G.
      const Formula& a = principal();
      if (a.op() != Op::Imp || !a.left().is_atomic()) invalid();
      bool atom_present = false;
      for (std::size_t j = 0; j < ants.size() && !atom_present; ++j)
        atom_present = j != r.principal && ants[j] == a.left();
      if (!atom_present) invalid();
      return {s.replace_antecedent(r.principal, {a.right()})};
    }
    case RuleId::ImpLeftAnd: {
      // (C&D)->B, Gamma |- G  becomes  C->(D->B), Gamma |- G.
      const Formula& a = principal();
      if (a.op() != Op::Imp || a.left().op() != Op::And) invalid();
      Formula curried = Formula::imp(a.left().left(),
                                     Formula::imp(a.left().right(), a.right()));
      return {s.replace_antecedent(r.principal, {curried})};
    }
    case RuleId::ImpLeftOr: {
      // (C|D)->B, Gamma |- G  becomes  C->B, D->B, Gamma |- G.
      const Formula& a = principal();
      if (a.op() != Op::Imp || a.left().op() != Op::Or) invalid();
      return {s.replace_antecedent(
          r.principal, {Formula::imp(a.left().left(), a.right()),
                        Formula::imp(a.left().right(), a.right())})};
    }
    case RuleId::ImpLeftImp: {
      // (C->D)->B, Gamma |- G:  premises  D->B, Gamma |- C->D  and  B, Gamma |- G.
      const Formula& a = principal();
      if (a.op() != Op::Imp || a.left().op() != Op::Imp) invalid();
      const Formula& c = a.left().left();
      const Formula& d = a.left().right();
      Sequent first = s.replace_antecedent(r.principal, {Formula::imp(d, a.right())})
                          .with_consequent(Formula::imp(c, d));
      Sequent second = s.replace_antecedent(r.principal, {a.right()});
      return {first, second};
    }
  }
  invalid();
  return {};
}

bool is_one_step_provable(const Sequent& s) {
  for (const Formula& a : s.antecedents()) {
    if (a.op() == Op::Bottom || a == s.consequent()) return true;
  }
  return false;
}

std::vector<std::int64_t> weight_multiset(const Sequent& s) {
  std::vector<std::int64_t> w;
  w.reserve(s.antecedents().size() + 1);
  for (const Formula& a : s.antecedents()) w.push_back(a.weight());
  w.push_back(s.consequent().weight());
  std::sort(w.begin(), w.end());
  return w;
}

bool multiset_strictly_less(const std::vector<std::int64_t>& after,
                            const std::vector<std::int64_t>& before) {
  // Dershowitz-Manna over a total order: remove the common part; the removed
  // side must be nonempty and dominate every added element.
  std::vector<std::int64_t> added, removed;
  std::size_t i = 0, j = 0;
  while (i < after.size() && j < before.size()) {
    if (after[i] == before[j]) {
      ++i, ++j;
    } else if (after[i] < before[j]) {
      added.push_back(after[i++]);
    } else {
      removed.push_back(before[j++]);
    }
  }
  added.insert(added.end(), after.begin() + i, after.end());
  removed.insert(removed.end(), before.begin() + j, before.end());
  if (removed.empty()) return false;
  std::int64_t max_removed = *std::max_element(removed.begin(), removed.end());
  return added.empty() ||
         *std::max_element(added.begin(), added.end()) < max_removed;
}

Decider::Outcome Decider::search(const Sequent& s, ProofTreePtr& proof) {
  auto it = cache_.find(s.text());
  if (it != cache_.end()) {
    if (!it->second.provable) return Outcome::Refuted;
    proof = it->second.proof;
    return Outcome::Proved;
  }
  if (remaining_ <= 0) return Outcome::OutOfBudget;
  --remaining_;
  ++visited_;

  for (const RuleInstance& r : enumerate_actions(s)) {
    std::vector<Sequent> premises = apply_rule(s, r);
    std::vector<ProofTreePtr> children;
    children.reserve(premises.size());
    bool all_proved = true;
    for (const Sequent& p : premises) {
      ProofTreePtr sub;
      Outcome o = search(p, sub);
      if (o == Outcome::OutOfBudget) return Outcome::OutOfBudget;
      if (o == Outcome::Refuted) {
        all_proved = false;
        break;
      }
      children.push_back(std::move(sub));
    }
    if (all_proved) {
      auto node = std::make_shared<ProofTree>();
      node->sequent = s;
      node->rule = r;
      node->children = std::move(children);
      proof = node;
      cache_.emplace(s.text(), Entry{true, proof});
      return Outcome::Proved;
    }
  }
  cache_.emplace(s.text(), Entry{false, nullptr});
  return Outcome::Refuted;
}

DecideResult Decider::decide(const Sequent& goal, std::int64_t budget) {
  if (budget < 1) throw std::invalid_argument("decide budget must be >= 1");
  remaining_ = budget;
  visited_ = 0;
  ProofTreePtr proof;
  Outcome o = search(goal, proof);
  DecideResult res;
  res.visited = visited_;
  switch (o) {
    case Outcome::Proved:
      res.verdict = Verdict::Provable;
      res.proof = std::move(proof);
      break;
    case Outcome::Refuted:
      res.verdict = Verdict::Unprovable;
      break;
    case Outcome::OutOfBudget:
      res.verdict = Verdict::BudgetExceeded;
      break;
  }
  return res;
}

DecideResult decide(const Sequent& goal, std::int64_t budget) {
  Decider d;
  return d.decide(goal, budget);
}

namespace {

bool check_rec(const ProofTree& node, std::string& path, CheckResult& out) {
  std::vector<Sequent> premises;
  try {
    premises = apply_rule(node.sequent, node.rule);
  } catch (const std::invalid_argument& e) {
    out = {false, path, e.what()};
    return false;
  }
  if (premises.size() != node.children.size()) {
    out = {false, path,
           "rule " + node.rule.to_string() + " yields " +
               std::to_string(premises.size()) + " premises but node has " +
               std::to_string(node.children.size()) + " children"};
    return false;
  }
  if (premises.empty() && node.rule.rule_id != RuleId::Init &&
      node.rule.rule_id != RuleId::BotLeft) {
    out = {false, path, "leaf rule is not an axiom"};
    return false;
  }
  for (std::size_t i = 0; i < premises.size(); ++i) {
    const ProofTree& child = *node.children[i];
    std::string child_path = path.empty() ? std::to_string(i)
                                          : path + "." + std::to_string(i);
    if (child.sequent != premises[i]) {
      out = {false, child_path,
             "child sequent " + child.sequent.text() +
                 " does not match premise " + premises[i].text()};
      return false;
    }
    std::swap(path, child_path);
    bool ok = check_rec(child, path, out);
    std::swap(path, child_path);
    if (!ok) return false;
  }
  return true;
}

}  // namespace

CheckResult check_proof(const ProofTree& t, const Sequent& goal) {
  if (t.sequent != goal) {
    return {false, "", "root sequent " + t.sequent.text() +
                           " does not match goal " + goal.text()};
  }
  CheckResult out{true, "", ""};
  std::string path;
  if (!check_rec(t, path, out)) return out;
  return {true, "", ""};
}

namespace {

void serialize_rec(const ProofTree& t, std::string& out) {
  out += "(";
  out += rule_name(t.rule.rule_id);
  if (t.rule.has_principal()) {
    out += " ";
    out += std::to_string(t.rule.principal);
  }
  out += " [";
  out += t.sequent.text();
  out += "]";
  for (const auto& child : t.children) {
    out += " ";
    serialize_rec(*child, out);
  }
  out += ")";
}

struct ProofParser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at position " + std::to_string(pos), pos);
  }
  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  }

  ProofTreePtr node() {
    expect('(');
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])))) ++pos;
    auto rid = rule_from_name(text.substr(start, pos - start));
    if (!rid) fail("unknown rule name");
    RuleInstance rule{*rid, RuleInstance::kNoPrincipal};
    skip_ws();
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::size_t p = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        p = p * 10 + (text[pos++] - '0');
      rule.principal = p;
    }
    expect('[');
    std::size_t end = text.find(']', pos);
    if (end == std::string::npos) fail("unterminated sequent");
    Sequent seq = parse_sequent(text.substr(pos, end - pos));
    pos = end + 1;
    auto out = std::make_shared<ProofTree>();
    out->sequent = std::move(seq);
    out->rule = rule;
    while (true) {
      skip_ws();
      if (pos >= text.size()) fail("unterminated node");
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      out->children.push_back(node());
    }
    return out;
  }
};

}  // namespace

std::string serialize_proof(const ProofTree& t) {
  std::string out;
  serialize_rec(t, out);
  return out;
}

ProofTreePtr parse_proof(const std::string& text) {
  ProofParser p{text};
  auto n = p.node();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input after proof");
  return n;
}

}  // namespace ipl
