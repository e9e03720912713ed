#include "ipl/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace ipl {

namespace {

// --- Canonical antecedent ordering -----------------------------------------
//
// Graph identity under variable renaming requires a traversal order that
// does not depend on variable names. The stored canonical order (length,
// text) is name-sensitive, so the encoder derives its own order: variables
// are ranked by iterated color refinement over their occurrence patterns,
// with backtracking individualization for classes refinement cannot split,
// and antecedents are sorted by their color-erased serialization.

using ColorMap = std::map<int, int>;

void append_colored(const Formula& f, const ColorMap& colors, std::string& out) {
  switch (f.op()) {
    case Op::Var:
      out += "V";
      out += std::to_string(colors.at(f.var_index()));
      return;
    case Op::Bottom:
      out += "F";
      return;
    case Op::And: out += "(&"; break;
    case Op::Or: out += "(|"; break;
    default: out += "(>"; break;
  }
  out += " ";
  append_colored(f.left(), colors, out);
  out += " ";
  append_colored(f.right(), colors, out);
  out += ")";
}

std::string colored_text(const Formula& f, const ColorMap& colors) {
  std::string out;
  out.reserve(static_cast<std::size_t>(f.length()) * 4);
  append_colored(f, colors, out);
  return out;
}

void collect_positions(const Formula& f, int& counter,
                       std::map<int, std::vector<int>>& positions) {
  int here = counter++;
  switch (f.op()) {
    case Op::Var:
      positions[f.var_index()].push_back(here);
      return;
    case Op::Bottom:
      return;
    default:
      collect_positions(f.left(), counter, positions);
      collect_positions(f.right(), counter, positions);
  }
}

class Canonicalizer {
 public:
  explicit Canonicalizer(const Sequent& s) : sequent_(s) {
    for (const Formula& a : s.antecedents()) formulas_.push_back(&a);
    formulas_.push_back(&s.consequent());
    for (const Formula* f : formulas_) {
      int counter = 0;
      occurrences_.emplace_back();
      collect_positions(*f, counter, occurrences_.back());
    }
    for (const auto& occ : occurrences_)
      for (const auto& [var, _] : occ) colors_[var] = 0;
  }

  // Final injective var coloring plus the antecedent traversal order.
  ColorMap run() {
    if (colors_.size() <= 1) {
      int rank = 0;
      for (auto& [var, color] : colors_) color = rank++;
      return colors_;
    }
    return search(colors_).second;
  }

  static std::vector<std::size_t> antecedent_order(const Sequent& s,
                                                   const ColorMap& colors) {
    std::vector<std::pair<std::pair<int, std::string>, std::size_t>> keyed;
    for (std::size_t i = 0; i < s.antecedents().size(); ++i) {
      const Formula& a = s.antecedents()[i];
      keyed.push_back({{a.length(), colored_text(a, colors)}, i});
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::size_t> order;
    order.reserve(keyed.size());
    for (const auto& k : keyed) order.push_back(k.second);
    return order;
  }

 private:
  // Refine until the partition stabilizes.
  void refine(ColorMap& colors) const {
    while (true) {
      std::vector<std::string> codes;
      codes.reserve(formulas_.size());
      for (std::size_t j = 0; j < formulas_.size(); ++j) {
        std::string code = j + 1 == formulas_.size() ? "C" : "A";
        code += colored_text(*formulas_[j], colors);
        codes.push_back(std::move(code));
      }
      std::map<int, std::string> signature;
      for (const auto& [var, color] : colors) {
        std::vector<std::string> parts;
        for (std::size_t j = 0; j < formulas_.size(); ++j) {
          auto it = occurrences_[j].find(var);
          if (it == occurrences_[j].end()) continue;
          std::string part = codes[j] + "@";
          for (int p : it->second) part += std::to_string(p) + ",";
          parts.push_back(std::move(part));
        }
        std::sort(parts.begin(), parts.end());
        std::string sig = std::to_string(color) + "#";
        for (const auto& p : parts) sig += p + ";";
        signature[var] = std::move(sig);
      }
      std::set<std::string> distinct;
      for (const auto& [_, sig] : signature) distinct.insert(sig);
      ColorMap next;
      for (const auto& [var, sig] : signature) {
        next[var] = static_cast<int>(
            std::distance(distinct.begin(), distinct.find(sig)));
      }
      if (next == colors) return;
      colors = std::move(next);
    }
  }

  bool all_distinct(const ColorMap& colors) const {
    std::set<int> seen;
    for (const auto& [_, c] : colors)
      if (!seen.insert(c).second) return false;
    return true;
  }

  std::string sequent_code(const ColorMap& colors) const {
    std::vector<std::string> ants;
    for (const Formula& a : sequent_.antecedents()) {
      std::string t = std::to_string(a.length()) + ":" + colored_text(a, colors);
      ants.push_back(std::move(t));
    }
    std::sort(ants.begin(), ants.end());
    std::string code;
    for (const auto& a : ants) code += a + "\n";
    code += "=>" + colored_text(sequent_.consequent(), colors);
    return code;
  }

  // Returns the lexicographically smallest sequent code over all ways of
  // individualizing tied variables, with the coloring that realizes it.
  std::pair<std::string, ColorMap> search(ColorMap colors) const {
    refine(colors);
    if (all_distinct(colors)) return {sequent_code(colors), colors};

    // Lowest color class with >= 2 members.
    std::map<int, std::vector<int>> classes;
    for (const auto& [var, c] : colors) classes[c].push_back(var);
    const std::vector<int>* tied = nullptr;
    for (const auto& [_, members] : classes) {
      if (members.size() >= 2) {
        tied = &members;
        break;
      }
    }
    std::pair<std::string, ColorMap> best;
    for (int v : *tied) {
      ColorMap branch;
      int pivot = colors.at(v);
      for (const auto& [var, c] : colors)
        branch[var] = c < pivot ? c : (var == v ? pivot : c + 1);
      auto candidate = search(std::move(branch));
      if (best.second.empty() || candidate.first < best.first)
        best = std::move(candidate);
    }
    return best;
  }

  const Sequent& sequent_;
  std::vector<const Formula*> formulas_;
  std::vector<std::map<int, std::vector<int>>> occurrences_;
  ColorMap colors_;
};

// --- Graph construction -----------------------------------------------------

VertexLabel label_of(const Formula& f) {
  switch (f.op()) {
    case Op::Var: return VertexLabel::Var;
    case Op::Bottom: return VertexLabel::Bottom;
    case Op::And: return VertexLabel::And;
    case Op::Or: return VertexLabel::Or;
    default: return VertexLabel::Imp;
  }
}

class Builder {
 public:
  Builder(GraphFormat format) : format_(format) {}

  std::int32_t build(const Formula& f) {
    if (format_ == GraphFormat::TM) {
      auto it = shared_.find(f.text());
      if (it != shared_.end()) return it->second;
    } else if (f.op() == Op::Var) {
      auto it = shared_.find(f.text());
      if (it != shared_.end()) return it->second;
    }
    std::int32_t left = -1, right = -1;
    if (!f.is_atomic()) {
      left = build(f.left());
      right = build(f.right());
    }
    std::int32_t id = static_cast<std::int32_t>(graph_.vertices.size());
    graph_.vertices.push_back(label_of(f));
    if (left >= 0) {
      graph_.edges.push_back({id, left, EdgeLabel::Left});
      graph_.edges.push_back({id, right, EdgeLabel::Right});
    }
    if (format_ == GraphFormat::TM || f.op() == Op::Var)
      shared_.emplace(f.text(), id);
    return id;
  }

  LabeledGraph finish(const std::vector<std::int32_t>& antecedent_roots,
                      std::int32_t consequent_root) {
    std::int32_t root = static_cast<std::int32_t>(graph_.vertices.size());
    graph_.vertices.push_back(VertexLabel::Root);
    for (std::int32_t a : antecedent_roots)
      graph_.edges.push_back({root, a, EdgeLabel::Left});
    graph_.edges.push_back({root, consequent_root, EdgeLabel::Right});
    graph_.root = root;
    return std::move(graph_);
  }

 private:
  GraphFormat format_;
  LabeledGraph graph_;
  std::unordered_map<std::string, std::int32_t> shared_;
};

}  // namespace

const char* vertex_label_name(VertexLabel label) {
  switch (label) {
    case VertexLabel::Root: return "Root";
    case VertexLabel::Imp: return "Imp";
    case VertexLabel::And: return "And";
    case VertexLabel::Or: return "Or";
    case VertexLabel::Bottom: return "Bottom";
    default: return "Var";
  }
}

const char* graph_format_name(GraphFormat format) {
  return format == GraphFormat::VM ? "vm" : "tm";
}

LabeledGraph to_graph(const Sequent& s, GraphFormat format) {
  std::vector<std::size_t> order;
  if (s.antecedents().size() > 1) {
    Canonicalizer canon(s);
    order = Canonicalizer::antecedent_order(s, canon.run());
  } else {
    for (std::size_t i = 0; i < s.antecedents().size(); ++i) order.push_back(i);
  }
  Builder builder(format);
  std::vector<std::int32_t> antecedent_roots;
  antecedent_roots.reserve(order.size());
  for (std::size_t i : order)
    antecedent_roots.push_back(builder.build(s.antecedents()[i]));
  std::int32_t consequent_root = builder.build(s.consequent());
  return builder.finish(antecedent_roots, consequent_root);
}

LabeledGraph to_vm_graph(const Sequent& s) { return to_graph(s, GraphFormat::VM); }
LabeledGraph to_tm_graph(const Sequent& s) { return to_graph(s, GraphFormat::TM); }

std::string dump_graph(const LabeledGraph& g) {
  std::string out;
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    out += "v" + std::to_string(i) + " " + vertex_label_name(g.vertices[i]) + "\n";
  }
  for (const auto& e : g.edges) {
    out += "e " + std::to_string(e.source) + " " + std::to_string(e.target) +
           (e.label == EdgeLabel::Left ? " L\n" : " R\n");
  }
  return out;
}

}  // namespace ipl
