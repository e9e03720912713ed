#include "ipl/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "ipl/parallel.hpp"

namespace ipl {

PolicyFactory naive_policy_factory() {
  return []() { return make_naive_greedy_policy(); };
}

PolicyFactory model_policy_factory(std::shared_ptr<const ValueFunction> model) {
  // One cache per worker: the model is fixed for the factory's lifetime, so
  // sharing values across that worker's rollouts is sound.
  return [model]() {
    auto cache = std::make_shared<ValueCache>(*model);
    return [model, cache](const State& s) { return value_policy(s, *cache); };
  };
}

double evaluate_policy_solve_rate(const std::vector<Sequent>& library,
                                  const PolicyFactory& factory,
                                  std::int64_t step_limit, double gamma, int threads) {
  if (library.empty()) return 0.0;
  std::vector<char> solved(library.size(), 0);
  parallel_for(library.size(), threads, [&](std::size_t i) {
    Policy policy = factory();
    SearchConfig cfg;
    cfg.gamma = gamma;
    cfg.step_limit = step_limit;
    Episode ep = run_episode(State::single(library[i]), policy, cfg);
    if (ep.outcome == EpisodeOutcome::Proved) {
      if (!ep.proof || !check_proof(*ep.proof, library[i]).ok)
        throw std::logic_error("rollout reported a proof that fails checking");
      solved[i] = 1;
    }
  });
  std::int64_t count = 0;
  for (char c : solved) count += c;
  return static_cast<double>(count) / static_cast<double>(library.size());
}

namespace {

// The no-augmentation ablation: label each library theorem the policy can
// prove with its rollout return; nothing else enters the dataset.
Dataset rollout_labeled_library(const std::vector<Sequent>& library,
                                const PolicyFactory& factory, const AugmentConfig& cfg) {
  std::vector<std::unique_ptr<Example>> slots(library.size());
  parallel_for(library.size(), cfg.threads, [&](std::size_t i) {
    Policy policy = factory();
    SearchConfig sc;
    sc.gamma = cfg.gamma;
    sc.step_limit = cfg.step_limit;
    Episode ep = run_episode(State::single(library[i]), policy, sc);
    if (ep.outcome == EpisodeOutcome::Proved) {
      slots[i] = std::make_unique<Example>(Example{
          library[i], ep.ret, static_cast<int>(i), is_one_step_provable(library[i]), 0});
    }
  });
  Dataset out;
  for (auto& slot : slots)
    if (slot) out.examples.push_back(*slot);
  return out;
}

}  // namespace

ApiResult api_iterate(const std::vector<Sequent>& library, const ApiConfig& cfg) {
  if (library.empty()) throw std::invalid_argument("api_iterate needs a nonempty library");

  ApiResult result;
  AugmentConfig augment_cfg = cfg.augment;
  augment_cfg.threads = cfg.threads;

  PolicyFactory current = naive_policy_factory();
  result.pi0_solve_rate = evaluate_policy_solve_rate(
      library, current, cfg.eval_step_limit, cfg.augment.gamma, cfg.threads);

  for (int i = 0; i < cfg.iterations; ++i) {
    Dataset data = cfg.augmentation
                       ? build_dataset(library, current, augment_cfg)
                       : rollout_labeled_library(library, current, augment_cfg);
    DatasetSplits splits = split_dataset(data, cfg.seed ^ (0x5eedULL + i));

    TrainOptions train_opts = cfg.train;
    train_opts.threads = cfg.threads;
    train_opts.seed = cfg.seed ^ (0xA5A5ULL * static_cast<std::uint64_t>(i + 1));
    TrainMetrics metrics;
    std::unique_ptr<ValueModel> model =
        train_model(cfg.model_kind, splits, train_opts, &metrics);

    std::shared_ptr<const ValueFunction> shared(model->clone().release());
    current = model_policy_factory(shared);
    double rate = evaluate_policy_solve_rate(library, current, cfg.eval_step_limit,
                                             cfg.augment.gamma, cfg.threads);

    ApiIterationLog log;
    log.iteration = i;
    log.dataset_size = data.size();
    if (!metrics.epochs.empty()) {
      log.train_mse = metrics.epochs.back().train_mse;
      log.val_mse = metrics.epochs.back().val_mse;
      log.test_mse = metrics.epochs.back().test_mse;
    }
    log.solve_rate = rate;
    result.log.push_back(log);
    result.models.push_back(std::move(model));
  }
  return result;
}

void write_api_log(const ApiResult& result, std::ostream& out) {
  out << "iteration,dataset_size,train_mse,val_mse,test_mse,solve_rate\n";
  char buf[160];
  for (const ApiIterationLog& log : result.log) {
    std::snprintf(buf, sizeof(buf), "%d,%zu,%.17g,%.17g,%.17g,%.17g\n", log.iteration,
                  log.dataset_size, log.train_mse, log.val_mse, log.test_mse,
                  log.solve_rate);
    out << buf;
  }
}

std::string BenchLimit::label() const {
  if (seconds > 0.0) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", seconds);
    return buf;
  }
  return std::to_string(steps);
}

BenchResult run_benchmark(const std::vector<BenchProver>& provers,
                          const std::vector<Sequent>& exam,
                          const std::vector<BenchLimit>& limits, double gamma,
                          int threads) {
  struct Task {
    std::size_t prover, problem, limit;
  };
  std::vector<Task> tasks;
  for (std::size_t pv = 0; pv < provers.size(); ++pv)
    for (std::size_t lim = 0; lim < limits.size(); ++lim)
      for (std::size_t pb = 0; pb < exam.size(); ++pb) tasks.push_back({pv, pb, lim});

  bool wall_clock = std::any_of(limits.begin(), limits.end(),
                                [](const BenchLimit& l) { return l.seconds > 0.0; });

  std::vector<BenchRecord> records(tasks.size());
  auto run_one = [&](std::size_t t) {
    const Task& task = tasks[t];
    const BenchLimit& limit = limits[task.limit];
    SearchConfig cfg;
    cfg.gamma = gamma;
    cfg.backtracking = true;
    cfg.step_limit = limit.steps > 0 ? limit.steps
                                     : std::numeric_limits<std::int64_t>::max();
    cfg.time_limit_seconds = limit.seconds;

    auto begin = std::chrono::steady_clock::now();
    GreedyDfsResult res = greedy_dfs(exam[task.problem], *provers[task.prover].model, cfg);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - begin)
                       .count();
    if (res.proved) {
      if (!res.proof || !check_proof(*res.proof, exam[task.problem]).ok)
        throw std::logic_error("greedy_dfs reported a proof that fails checking");
    }

    char id[16];
    std::snprintf(id, sizeof(id), "p%04zu", task.problem);
    records[t] = {id,        provers[task.prover].id, limit.label(),
                  res.proved, res.steps,              elapsed};
  };

  parallel_for(tasks.size(), wall_clock ? 1 : threads, run_one);

  BenchResult out;
  out.records = std::move(records);
  return out;
}

void write_bench_csv(const BenchResult& result, std::ostream& out) {
  out << "problem_id,prover,time_limit,solved,steps,millis\n";
  for (const BenchRecord& r : result.records) {
    out << r.problem_id << "," << r.prover << "," << r.limit << ","
        << (r.solved ? 1 : 0) << "," << r.steps << "," << r.millis << "\n";
  }
}

void write_bench_aggregate_csv(const BenchResult& result, std::ostream& out) {
  // (prover, limit) -> (solved, total), in first-seen order.
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, std::pair<int, int>> agg;
  for (const BenchRecord& r : result.records) {
    auto key = std::make_pair(r.prover, r.limit);
    if (!agg.count(key)) keys.push_back(key);
    auto& [solved, total] = agg[key];
    solved += r.solved ? 1 : 0;
    total += 1;
  }
  out << "prover,time_limit,solve_rate\n";
  char buf[64];
  for (const auto& key : keys) {
    auto [solved, total] = agg[key];
    std::snprintf(buf, sizeof(buf), "%.17g",
                  static_cast<double>(solved) / static_cast<double>(total));
    out << key.first << "," << key.second << "," << buf << "\n";
  }
}

void write_cactus_csv(const BenchResult& result, std::ostream& out) {
  out << "prover,rank,steps\n";
  std::vector<std::string> provers;
  for (const BenchRecord& r : result.records) {
    if (std::find(provers.begin(), provers.end(), r.prover) == provers.end())
      provers.push_back(r.prover);
  }
  for (const std::string& prover : provers) {
    std::vector<std::int64_t> steps;
    for (const BenchRecord& r : result.records)
      if (r.prover == prover && r.solved) steps.push_back(r.steps);
    std::sort(steps.begin(), steps.end());
    for (std::size_t i = 0; i < steps.size(); ++i)
      out << prover << "," << i + 1 << "," << steps[i] << "\n";
  }
}

void write_scatter_csv(const BenchResult& result, const std::string& prover_a,
                       const std::string& prover_b, std::ostream& out) {
  out << "problem_id," << prover_a << "," << prover_b << "\n";
  std::string first_limit;
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> rows;
  std::vector<std::string> order;
  for (const BenchRecord& r : result.records) {
    if (first_limit.empty()) first_limit = r.limit;
    if (r.limit != first_limit) continue;
    if (r.prover != prover_a && r.prover != prover_b) continue;
    if (!rows.count(r.problem_id)) order.push_back(r.problem_id);
    auto& row = rows[r.problem_id];
    (r.prover == prover_a ? row.first : row.second) = r.steps;
  }
  for (const std::string& id : order) {
    out << id << "," << rows[id].first << "," << rows[id].second << "\n";
  }
}

}  // namespace ipl
