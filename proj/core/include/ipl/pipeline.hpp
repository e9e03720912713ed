#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ipl/augment.hpp"

namespace ipl {

struct ApiConfig {
  int iterations = 2;
  ModelKind model_kind = ModelKind::GnnTm;
  AugmentConfig augment;
  TrainOptions train;
  std::int64_t eval_step_limit = 10000;  // per-problem rollout budget
  bool augmentation = true;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct ApiIterationLog {
  int iteration = 0;  // the model trained on D_iteration defines pi_{iteration+1}
  std::size_t dataset_size = 0;
  double train_mse = 0.0, val_mse = 0.0, test_mse = 0.0;
  double solve_rate = 0.0;  // of pi_{iteration+1} on the library
};

struct ApiResult {
  double pi0_solve_rate = 0.0;
  std::vector<std::unique_ptr<ValueModel>> models;  // V for pi_1, pi_2, ...
  std::vector<ApiIterationLog> log;
};

// Alternating loop: augment with pi_i, fit V on D_i, define pi_{i+1} by the
// one-step greedy rule over V, evaluate by plain rollouts. Every policy
// starts from the naive length-greedy pi_0. Each iteration trains from a
// fresh initialization.
ApiResult api_iterate(const std::vector<Sequent>& library, const ApiConfig& cfg);

// Fraction of library theorems proven by rollouts without backtracking.
// Every success is certificate-checked.
double evaluate_policy_solve_rate(const std::vector<Sequent>& library,
                                  const PolicyFactory& factory,
                                  std::int64_t step_limit, double gamma, int threads);

PolicyFactory model_policy_factory(std::shared_ptr<const ValueFunction> model);
PolicyFactory naive_policy_factory();

// CSV row per (iteration): iteration,dataset_size,train_mse,val_mse,test_mse,solve_rate
void write_api_log(const ApiResult& result, std::ostream& out);

struct BenchProver {
  std::string id;
  std::shared_ptr<const ValueFunction> model;
};

struct BenchLimit {
  double seconds = 0.0;     // wall-clock mode when > 0
  std::int64_t steps = 0;   // step-limit mode when > 0 (CI-friendly)
  std::string label() const;
};

struct BenchRecord {
  std::string problem_id;
  std::string prover;
  std::string limit;
  bool solved = false;
  std::int64_t steps = 0;
  std::int64_t millis = 0;
};

struct BenchResult {
  std::vector<BenchRecord> records;
};

// Greedy DFS (backtracking on) per problem, prover, and limit. Timeouts are
// recorded as unsolved. Step-limit runs may be parallel; wall-clock runs are
// serial so measured times stay meaningful.
BenchResult run_benchmark(const std::vector<BenchProver>& provers,
                          const std::vector<Sequent>& exam,
                          const std::vector<BenchLimit>& limits, double gamma,
                          int threads);

// problem_id,prover,time_limit,solved,steps,millis
void write_bench_csv(const BenchResult& result, std::ostream& out);
// prover,time_limit,solve_rate
void write_bench_aggregate_csv(const BenchResult& result, std::ostream& out);
// prover,rank,steps  (solved problems only, steps ascending per prover)
void write_cactus_csv(const BenchResult& result, std::ostream& out);
// problem_id,<proverA>,<proverB>  (steps of each, first limit only)
void write_scatter_csv(const BenchResult& result, const std::string& prover_a,
                       const std::string& prover_b, std::ostream& out);

}  // namespace ipl
