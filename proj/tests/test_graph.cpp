#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>

#include "ipl/graph.hpp"
#include "ipl/rng.hpp"
#include "support/random_terms.hpp"

using namespace ipl;

namespace {

int count_label(const LabeledGraph& g, VertexLabel label) {
  int n = 0;
  for (VertexLabel v : g.vertices)
    if (v == label) ++n;
  return n;
}

// VM prediction: distinct variables + connective/bottom occurrences + root.
int vm_expected_vertices(const Sequent& s) {
  std::set<int> vars;
  int connectives = 0;
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    switch (f.op()) {
      case Op::Var: vars.insert(f.var_index()); return;
      case Op::Bottom: ++connectives; return;
      default:
        ++connectives;
        walk(f.left());
        walk(f.right());
    }
  };
  for (const Formula& a : s.antecedents()) walk(a);
  walk(s.consequent());
  return static_cast<int>(vars.size()) + connectives + 1;
}

}  // namespace

TEST_CASE("VM graph of |- P1") {
  LabeledGraph g = to_vm_graph(Sequent({}, Formula::var(1)));
  REQUIRE(g.vertices.size() == 2);
  CHECK(count_label(g, VertexLabel::Root) == 1);
  CHECK(count_label(g, VertexLabel::Var) == 1);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].label == EdgeLabel::Right);
  CHECK(g.edges[0].source == g.root);
}

TEST_CASE("VM graph of |- P1 -> P1 merges the variable") {
  LabeledGraph g = to_vm_graph(Sequent({}, parse_formula("P1 -> P1")));
  REQUIRE(g.vertices.size() == 3);
  CHECK(count_label(g, VertexLabel::Imp) == 1);
  CHECK(count_label(g, VertexLabel::Var) == 1);
  // Imp's Left and Right edges point at the same Var vertex.
  std::int32_t imp = -1;
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    if (g.vertices[i] == VertexLabel::Imp) imp = static_cast<std::int32_t>(i);
  std::int32_t left = -1, right = -1;
  for (const auto& e : g.edges) {
    if (e.source == imp && e.label == EdgeLabel::Left) left = e.target;
    if (e.source == imp && e.label == EdgeLabel::Right) right = e.target;
  }
  CHECK(left == right);
}

TEST_CASE("golden dump for |- P1 | P2 -> P1") {
  LabeledGraph g = to_vm_graph(Sequent({}, parse_formula("P1 | P2 -> P1")));
  CHECK(dump_graph(g) ==
        "v0 Var\n"
        "v1 Var\n"
        "v2 Or\n"
        "v3 Imp\n"
        "v4 Root\n"
        "e 2 0 L\n"
        "e 2 1 R\n"
        "e 3 2 L\n"
        "e 3 0 R\n"
        "e 4 3 R\n");
}

TEST_CASE("renaming the paper example leaves the graph identical") {
  Sequent s({}, parse_formula("P1 | P2 -> P1"));
  Sequent renamed = s.rename({{1, 8}, {2, 4}});
  CHECK(to_vm_graph(s) == to_vm_graph(renamed));
  CHECK(to_tm_graph(s) == to_tm_graph(renamed));
}

TEST_CASE("alpha-renaming invariance on random sequents") {
  Rng rng(59);
  for (int i = 0; i < 1500; ++i) {
    Sequent s = testing::random_sequent(rng, 4, 9, 3);
    Sequent renamed = s.rename(testing::random_renaming(rng, 3));
    CHECK(to_vm_graph(s) == to_vm_graph(renamed));
    CHECK(to_tm_graph(s) == to_tm_graph(renamed));
  }
}

TEST_CASE("invariance with correlated shared variables across antecedents") {
  // Shapes that tie under name-erased keys but share variables asymmetrically.
  Sequent s({parse_formula("P1 & P2"), parse_formula("P2 & P3")}, Formula::bottom());
  Sequent renamed = s.rename({{1, 3}, {2, 2}, {3, 1}});
  CHECK(to_vm_graph(s) == to_vm_graph(renamed));
  CHECK(to_tm_graph(s) == to_tm_graph(renamed));

  Sequent t({parse_formula("P1 & P2"), parse_formula("P3 & P3")}, Formula::bottom());
  Sequent t_renamed = t.rename({{1, 5}, {2, 6}, {3, 1}});
  CHECK(to_vm_graph(t) == to_vm_graph(t_renamed));
  CHECK(to_tm_graph(t) == to_tm_graph(t_renamed));

  Sequent u({parse_formula("P1 & P2"), parse_formula("P2 & P1")}, Formula::var(1));
  Sequent u_renamed = u.rename({{1, 2}, {2, 1}});
  CHECK(to_vm_graph(u) == to_vm_graph(u_renamed));
  CHECK(to_tm_graph(u) == to_tm_graph(u_renamed));
}

TEST_CASE("TM merges repeated subterms") {
  // Two occurrences of P1 -> (~P2 & P1) share one subgraph.
  Formula shared = parse_formula("P1 -> (~P2 & P1)");
  Sequent s({shared}, Formula::conj(shared, Formula::var(2)));
  LabeledGraph vm = to_vm_graph(s);
  LabeledGraph tm = to_tm_graph(s);
  CHECK(tm.vertices.size() < vm.vertices.size());
  CHECK(count_label(tm, VertexLabel::Imp) < count_label(vm, VertexLabel::Imp));
}

TEST_CASE("TM shows Init visibility: A |- A shares one vertex") {
  Rng rng(61);
  for (int i = 0; i < 100; ++i) {
    Formula a = testing::random_formula_default(rng, 9, 3);
    LabeledGraph tm = to_tm_graph(Sequent({a}, a));
    std::int32_t left = -1, right = -1;
    for (const auto& e : tm.edges) {
      if (e.source == tm.root && e.label == EdgeLabel::Left) left = e.target;
      if (e.source == tm.root && e.label == EdgeLabel::Right) right = e.target;
    }
    CHECK(left == right);
  }
}

TEST_CASE("TM vertex count never exceeds VM vertex count") {
  Rng rng(67);
  for (int i = 0; i < 1000; ++i) {
    Sequent s = testing::random_sequent(rng, 3, 11, 3);
    CHECK(to_tm_graph(s).vertices.size() <= to_vm_graph(s).vertices.size());
  }
}

TEST_CASE("strictly smaller TM on a repeated-subterm family") {
  for (int reps = 2; reps <= 5; ++reps) {
    Formula block = parse_formula("P1 & P2");  // length > 1
    std::vector<Formula> ants(static_cast<std::size_t>(reps), block);
    Sequent s(std::move(ants), block);
    CHECK(to_tm_graph(s).vertices.size() < to_vm_graph(s).vertices.size());
  }
}

TEST_CASE("VM vertex count formula") {
  Rng rng(71);
  for (int i = 0; i < 1000; ++i) {
    Sequent s = testing::random_sequent(rng, 3, 11, 3);
    CHECK(static_cast<int>(to_vm_graph(s).vertices.size()) == vm_expected_vertices(s));
  }
}

TEST_CASE("encoding is idempotent and deterministic") {
  Rng rng(73);
  for (int i = 0; i < 300; ++i) {
    Sequent s = testing::random_sequent(rng, 3, 9, 3);
    CHECK(to_tm_graph(s) == to_tm_graph(s));
    CHECK(to_vm_graph(s) == to_vm_graph(s));
  }
}

TEST_CASE("graph structure invariants") {
  Rng rng(79);
  for (int i = 0; i < 300; ++i) {
    Sequent s = testing::random_sequent(rng, 3, 9, 3);
    for (GraphFormat fmt : {GraphFormat::VM, GraphFormat::TM}) {
      LabeledGraph g = to_graph(s, fmt);
      // Root has one Left edge per antecedent and exactly one Right edge.
      int root_left = 0, root_right = 0;
      std::vector<int> out_left(g.vertices.size(), 0), out_right(g.vertices.size(), 0);
      for (const auto& e : g.edges) {
        if (e.source == g.root) {
          (e.label == EdgeLabel::Left ? root_left : root_right) += 1;
        } else {
          (e.label == EdgeLabel::Left ? out_left[static_cast<std::size_t>(e.source)]
                                      : out_right[static_cast<std::size_t>(e.source)]) += 1;
        }
      }
      CHECK(root_left == static_cast<int>(s.antecedents().size()));
      CHECK(root_right == 1);
      for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        if (static_cast<std::int32_t>(v) == g.root) continue;
        if (g.vertices[v] == VertexLabel::Var || g.vertices[v] == VertexLabel::Bottom) {
          CHECK(out_left[v] == 0);
          CHECK(out_right[v] == 0);
        } else {
          CHECK(out_left[v] == 1);
          CHECK(out_right[v] == 1);
        }
      }
    }
  }
}
