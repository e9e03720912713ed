#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipl/sequent.hpp"

namespace ipl {

enum class VertexLabel : std::uint8_t { Root, Imp, And, Or, Bottom, Var };
enum class EdgeLabel : std::uint8_t { Left, Right };

const char* vertex_label_name(VertexLabel label);

// Directed acyclic graph over a sequent: one Root vertex with a Left edge
// per antecedent and a Right edge to the consequent; connective vertices
// carry one Left and one Right edge. Construction is canonical, so two
// sequents equal up to injective variable renaming produce identical
// vertex/edge lists.
struct LabeledGraph {
  struct Edge {
    std::int32_t source;
    std::int32_t target;
    EdgeLabel label;
    bool operator==(const Edge& other) const {
      return source == other.source && target == other.target && label == other.label;
    }
  };

  std::vector<VertexLabel> vertices;
  std::vector<Edge> edges;
  std::int32_t root = -1;

  std::size_t vertex_count() const { return vertices.size(); }
  bool operator==(const LabeledGraph& other) const {
    return vertices == other.vertices && edges == other.edges && root == other.root;
  }
};

enum class GraphFormat { VM, TM };

const char* graph_format_name(GraphFormat format);

// Variable-merging: abstract syntax forest with same-index variable leaves
// merged and names erased to the common label Var.
LabeledGraph to_vm_graph(const Sequent& s);

// Term-merging: additionally shares every structurally identical subterm
// (maximal sharing), including across the antecedent/consequent boundary.
LabeledGraph to_tm_graph(const Sequent& s);

LabeledGraph to_graph(const Sequent& s, GraphFormat format);

// One line per vertex `v<id> <label>`, then per edge `e <src> <dst> <L|R>`.
std::string dump_graph(const LabeledGraph& g);

}  // namespace ipl
