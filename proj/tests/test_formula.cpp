#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ipl/formula.hpp"
#include "ipl/rng.hpp"
#include "ipl/sequent.hpp"
#include "support/random_terms.hpp"

using namespace ipl;

TEST_CASE("parse_formula basic shapes") {
  Formula f = parse_formula("P1 -> P1");
  CHECK(f.op() == Op::Imp);
  CHECK(f.left() == Formula::var(1));
  CHECK(f.right() == Formula::var(1));

  // ~A desugars to A -> false on construction.
  Formula n = parse_formula("~P2");
  CHECK(n == Formula::imp(Formula::var(2), Formula::bottom()));

  // & binds tighter than |.
  Formula p = parse_formula("P1 & P2 | P3");
  CHECK(p == Formula::disj(Formula::conj(Formula::var(1), Formula::var(2)),
                           Formula::var(3)));
}

TEST_CASE("parse_formula precedence and associativity") {
  CHECK(parse_formula("P1 -> P2 -> P3") ==
        Formula::imp(Formula::var(1), Formula::imp(Formula::var(2), Formula::var(3))));
  CHECK(parse_formula("P1 & P2 & P3") ==
        Formula::conj(Formula::conj(Formula::var(1), Formula::var(2)), Formula::var(3)));
  CHECK(parse_formula("~P1 & P2") ==
        Formula::conj(Formula::neg(Formula::var(1)), Formula::var(2)));
  CHECK(parse_formula("P1 | P2 -> P1") ==
        Formula::imp(Formula::disj(Formula::var(1), Formula::var(2)), Formula::var(1)));
  CHECK(parse_formula("~~P1") == Formula::neg(Formula::neg(Formula::var(1))));
  CHECK(parse_formula("(P1 -> P2) -> P1") ==
        Formula::imp(Formula::imp(Formula::var(1), Formula::var(2)), Formula::var(1)));
  CHECK(parse_formula("  P3  ") == Formula::var(3));
}

TEST_CASE("parse_formula errors carry positions") {
  CHECK_THROWS_AS(parse_formula("P1 &"), ParseError);
  CHECK_THROWS_AS(parse_formula("P0"), ParseError);
  CHECK_THROWS_AS(parse_formula("(P1 -> P2"), ParseError);
  CHECK_THROWS_AS(parse_formula("P1 P2"), ParseError);
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("Q1"), ParseError);
  try {
    parse_formula("P1 & & P2");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("print_formula examples") {
  CHECK(print_formula(Formula::imp(Formula::var(1), Formula::var(1))) == "P1 -> P1");
  // Negation is not re-sugared.
  CHECK(print_formula(Formula::imp(Formula::var(2), Formula::bottom())) == "P2 -> false");
  CHECK(print_formula(Formula::disj(Formula::conj(Formula::var(1), Formula::var(2)),
                                    Formula::var(3))) == "P1 & P2 | P3");
  // Parenthesization of the non-default association.
  CHECK(print_formula(Formula::conj(Formula::var(1),
                                    Formula::conj(Formula::var(2), Formula::var(3)))) ==
        "P1 & (P2 & P3)");
  CHECK(print_formula(Formula::imp(Formula::imp(Formula::var(1), Formula::var(2)),
                                   Formula::var(1))) == "(P1 -> P2) -> P1");
}

TEST_CASE("round-trip property over random formulas") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    Formula f = testing::random_formula_default(rng, 15, 4);
    CHECK(parse_formula(print_formula(f)) == f);
  }
}

TEST_CASE("formula_length") {
  CHECK(formula_length(Formula::var(1)) == 1);
  Formula pq_qp = Formula::imp(Formula::conj(Formula::var(1), Formula::var(2)),
                               Formula::conj(Formula::var(2), Formula::var(1)));
  CHECK(formula_length(pq_qp) == 7);
  CHECK(formula_length(parse_formula("~P2")) == 3);  // P2, ->, false
}

TEST_CASE("length additivity property") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    Formula a = testing::random_formula_default(rng);
    Formula b = testing::random_formula_default(rng);
    CHECK(Formula::conj(a, b).length() == a.length() + b.length() + 1);
    CHECK(Formula::disj(a, b).length() == a.length() + b.length() + 1);
    CHECK(Formula::imp(a, b).length() == a.length() + b.length() + 1);
  }
}

TEST_CASE("rename_variables") {
  Formula f = parse_formula("P1 | P2 -> P1");
  CHECK(rename_variables(f, {}) == f);
  CHECK(rename_variables(f, {{1, 1}, {2, 2}}) == f);

  Formula renamed = rename_variables(f, {{1, 8}, {2, 4}});
  CHECK(renamed == parse_formula("P8 | P4 -> P8"));

  // Swapping twice is the identity.
  std::unordered_map<int, int> swap{{1, 2}, {2, 1}};
  CHECK(rename_variables(rename_variables(f, swap), swap) == f);

  CHECK_THROWS_AS(rename_variables(f, {{1, 5}, {2, 5}}), std::invalid_argument);
  // Non-injectivity only matters on occurring indices.
  CHECK_NOTHROW(rename_variables(f, {{1, 5}, {9, 5}}));
}

TEST_CASE("rename preserves length and shape") {
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    Formula f = testing::random_formula_default(rng, 12, 3);
    auto map = testing::random_renaming(rng, 3);
    Formula g = rename_variables(f, map);
    CHECK(g.length() == f.length());
    CHECK(g.weight() == f.weight());
    CHECK(g.op() == f.op());
  }
}

TEST_CASE("sequent canonical order and serialization") {
  Formula a = parse_formula("P1 & P2");
  Formula b = parse_formula("P3");
  Sequent s1({a, b}, Formula::var(1));
  Sequent s2({b, a}, Formula::var(1));
  CHECK(s1 == s2);
  CHECK(s1.text() == s2.text());
  CHECK(s1.text() == "P3, P1 & P2 |- P1");  // sorted by length, then text

  // Duplicates are preserved.
  Sequent dup({a, a}, Formula::var(1));
  CHECK(dup.antecedents().size() == 2);
}

TEST_CASE("sequent_length") {
  CHECK(sequent_length(Sequent({}, Formula::var(1))) == 1);
  CHECK(sequent_length(Sequent({Formula::var(1), Formula::var(2)}, Formula::var(1))) == 3);
  CHECK(sequent_length(Sequent({parse_formula("P1 & P2")}, parse_formula("P2 & P1"))) == 6);
}

TEST_CASE("parse_sequent") {
  Sequent s = parse_sequent("P1, P2 |- P1 & P2");
  CHECK(s.antecedents().size() == 2);
  CHECK(s.consequent() == parse_formula("P1 & P2"));
  CHECK(parse_sequent("|- P1").antecedents().empty());
  CHECK(parse_sequent(s.text()) == s);
  CHECK_THROWS_AS(parse_sequent("P1, P2"), ParseError);
  CHECK_THROWS_AS(parse_sequent("P1, |- P2"), ParseError);
}

TEST_CASE("permuted antecedent lists serialize identically (property)") {
  Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    std::vector<Formula> ants;
    int k = static_cast<int>(rng.uniform_int(2, 5));
    for (int j = 0; j < k; ++j) ants.push_back(testing::random_formula_default(rng));
    Formula goal = testing::random_formula_default(rng);
    std::vector<Formula> shuffled = ants;
    rng.shuffle(shuffled);
    CHECK(Sequent(ants, goal).text() == Sequent(shuffled, goal).text());
  }
}
