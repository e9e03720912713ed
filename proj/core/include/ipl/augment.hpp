#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ipl/value_model.hpp"

namespace ipl {

struct AugmentConfig {
  int n_ge2 = 1000;              // cap on not-one-step-provable examples per seed
  int n_eq1 = 100;               // cap on one-step-provable examples per seed
  std::int64_t step_limit = 10000;  // rollout step limit
  double gamma = 0.95;
  int threads = 1;
};

// BFS data augmentation from one provable seed theorem. Empty when the
// policy fails to prove the seed. Each dequeued sequent is labeled with the
// return of a fresh policy rollout; one-step-provable sequents are capped at
// n_eq1, the rest at n_ge2 (checked in the loop condition, so the count can
// reach it exactly).
std::vector<Example> augment_from_theorem(const Sequent& seed, const Policy& policy,
                                          const AugmentConfig& cfg);

// Union over the library, origin id = seed index. policy_factory makes one
// policy per worker so value caches are not shared across threads.
using PolicyFactory = std::function<Policy()>;
Dataset build_dataset(const std::vector<Sequent>& library,
                      const PolicyFactory& policy_factory, const AugmentConfig& cfg);

// Origin-disjoint 4:1:1 partition; origin assignment by seeded shuffle.
DatasetSplits split_dataset(const Dataset& data, std::uint64_t seed);

// One record per line: sequent text, return (17 significant digits), origin
// id, one_step flag, depth; tab-separated.
void write_dataset(const Dataset& data, std::ostream& out);
Dataset read_dataset(std::istream& in);
void save_dataset(const Dataset& data, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace ipl
