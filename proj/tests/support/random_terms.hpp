#pragma once

#include <unordered_map>
#include <vector>

#include "ipl/generator.hpp"
#include "ipl/rng.hpp"
#include "ipl/sequent.hpp"

namespace ipl::testing {

inline Formula random_formula_default(Rng& rng, int max_len = 9, int vars = 3) {
  OpProbs q{0.25, 0.25, 0.25, 0.25};
  return random_formula(static_cast<int>(rng.uniform_int(1, max_len)), vars, q, rng);
}

inline Sequent random_sequent(Rng& rng, int max_antecedents = 4, int max_len = 9,
                              int vars = 3) {
  std::vector<Formula> ants;
  int k = static_cast<int>(rng.uniform_int(0, max_antecedents));
  for (int i = 0; i < k; ++i) ants.push_back(random_formula_default(rng, max_len, vars));
  return Sequent(std::move(ants), random_formula_default(rng, max_len, vars));
}

// Random injective map over 1..vars into a scattered range.
inline std::unordered_map<int, int> random_renaming(Rng& rng, int vars) {
  std::vector<int> images;
  for (int i = 1; i <= vars * 3 + 2; ++i) images.push_back(i);
  rng.shuffle(images);
  std::unordered_map<int, int> map;
  for (int i = 1; i <= vars; ++i) map[i] = images[static_cast<std::size_t>(i - 1)];
  return map;
}

}  // namespace ipl::testing
