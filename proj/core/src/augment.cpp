#include "ipl/augment.hpp"

#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "ipl/parallel.hpp"
#include "ipl/rng.hpp"

namespace ipl {

namespace {

double rollout_return(const Sequent& s, const Policy& policy, const AugmentConfig& cfg) {
  SearchConfig sc;
  sc.gamma = cfg.gamma;
  sc.step_limit = cfg.step_limit;
  Episode ep = run_episode(State::single(s), policy, sc);
  return ep.outcome == EpisodeOutcome::Proved ? ep.ret : 0.0;
}

}  // namespace

std::vector<Example> augment_from_theorem(const Sequent& seed, const Policy& policy,
                                          const AugmentConfig& cfg) {
  SearchConfig sc;
  sc.gamma = cfg.gamma;
  sc.step_limit = cfg.step_limit;
  Episode seed_episode = run_episode(State::single(seed), policy, sc);
  if (seed_episode.outcome != EpisodeOutcome::Proved) return {};

  std::vector<Example> out;
  int count_ge2 = 0, count_eq1 = 0;
  std::deque<std::pair<Sequent, int>> queue;  // (sequent, BFS depth)
  std::unordered_set<std::string> visited;
  queue.push_back({seed, 0});

  while (!queue.empty() && count_ge2 < cfg.n_ge2) {
    auto [current, depth] = queue.front();
    queue.pop_front();
    if (!visited.insert(current.text()).second) continue;

    double ret = rollout_return(current, policy, cfg);
    Example ex{current, ret, 0, is_one_step_provable(current), depth};
    if (ex.one_step) {
      if (count_eq1 < cfg.n_eq1) {
        out.push_back(ex);
        ++count_eq1;
      }
    } else {
      out.push_back(ex);
      ++count_ge2;
    }
    // Every premise of every applicable rule, regardless of the caps.
    for (const RuleInstance& r : enumerate_actions(current)) {
      for (Sequent& premise : apply_rule(current, r))
        queue.push_back({std::move(premise), depth + 1});
    }
  }
  return out;
}

Dataset build_dataset(const std::vector<Sequent>& library,
                      const PolicyFactory& policy_factory, const AugmentConfig& cfg) {
  std::vector<std::vector<Example>> per_seed(library.size());
  parallel_for(library.size(), cfg.threads, [&](std::size_t i) {
    Policy policy = policy_factory();
    per_seed[i] = augment_from_theorem(library[i], policy, cfg);
    for (Example& ex : per_seed[i]) ex.origin = static_cast<int>(i);
  });
  Dataset out;
  for (auto& chunk : per_seed)
    out.examples.insert(out.examples.end(), chunk.begin(), chunk.end());
  return out;
}

DatasetSplits split_dataset(const Dataset& data, std::uint64_t seed) {
  std::vector<int> origins;
  {
    std::unordered_set<int> seen;
    for (const Example& ex : data.examples)
      if (seen.insert(ex.origin).second) origins.push_back(ex.origin);
  }
  std::sort(origins.begin(), origins.end());
  Rng rng(seed);
  rng.shuffle(origins);

  // First 4/6 of origins to train, next 1/6 to val, rest to test.
  std::size_t n = origins.size();
  std::size_t train_n = (n * 4) / 6;
  std::size_t val_n = n / 6;
  std::unordered_set<int> train_set(origins.begin(), origins.begin() + train_n);
  std::unordered_set<int> val_set(origins.begin() + train_n,
                                  origins.begin() + train_n + val_n);

  DatasetSplits splits;
  for (const Example& ex : data.examples) {
    if (train_set.count(ex.origin)) {
      splits.train.examples.push_back(ex);
    } else if (val_set.count(ex.origin)) {
      splits.val.examples.push_back(ex);
    } else {
      splits.test.examples.push_back(ex);
    }
  }
  return splits;
}

void write_dataset(const Dataset& data, std::ostream& out) {
  char buf[48];
  for (const Example& ex : data.examples) {
    std::snprintf(buf, sizeof(buf), "%.17g", ex.ret);
    out << ex.sequent.text() << "\t" << buf << "\t" << ex.origin << "\t"
        << (ex.one_step ? 1 : 0) << "\t" << ex.depth << "\n";
  }
}

Dataset read_dataset(std::istream& in) {
  Dataset out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos
                                                                   : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 5)
      throw std::runtime_error("dataset line " + std::to_string(line_no) +
                               ": expected 5 tab-separated fields");
    Example ex;
    ex.sequent = parse_sequent(fields[0]);
    ex.ret = std::stod(fields[1]);
    ex.origin = std::stoi(fields[2]);
    ex.one_step = fields[3] == "1";
    ex.depth = std::stoi(fields[4]);
    out.examples.push_back(std::move(ex));
  }
  return out;
}

void save_dataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  write_dataset(data, out);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read dataset file: " + path);
  return read_dataset(in);
}

}  // namespace ipl
