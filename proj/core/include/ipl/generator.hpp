#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ipl/calculus.hpp"
#include "ipl/rng.hpp"

namespace ipl {

// Operator probabilities in the order (and, or, imp, neg).
using OpProbs = std::array<double, 4>;

struct GeneratorConfig {
  int count = 50;
  int n_min = 10, n_max = 30;      // desired formula length range
  int m_min = 2, m_max = 5;        // variable count range
  double dirichlet_alpha = 3.0;
  std::int64_t decide_budget = 200000;
  std::int64_t max_attempts = 0;   // 0 = 1000 * count
  std::uint64_t seed = 0;
};

// Top-down random syntax tree with desired length n over m variables.
// n <= 2 yields a uniform variable; negation recurses with n-1 and desugars
// to an implication of Bottom.
Formula random_formula(int n, int m, const OpProbs& q, Rng& rng);

// Symmetric Dirichlet draw (four normalized Gamma(alpha, 1) variates).
OpProbs sample_op_probs(double alpha, Rng& rng);

struct LibraryStats {
  std::int64_t attempts = 0;
  std::int64_t rejected_unprovable = 0;
  std::int64_t rejected_budget = 0;
};

// Repeatedly samples (n, m, q) and a formula, keeping "|- A" iff the decision
// procedure proves it within budget. Throws if max_attempts is exhausted
// before `count` theorems are found.
std::vector<Sequent> build_library(const GeneratorConfig& cfg, Rng& rng,
                                   LibraryStats* stats = nullptr);

// One formula per line; '#'-prefixed header lines record config and seed.
void write_library(const std::vector<Sequent>& library, const GeneratorConfig& cfg,
                   std::ostream& out);
std::vector<Sequent> read_library(std::istream& in);
void save_library(const std::vector<Sequent>& library, const GeneratorConfig& cfg,
                  const std::string& path);
std::vector<Sequent> load_library(const std::string& path);

}  // namespace ipl
