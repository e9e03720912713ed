#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ipl/autodiff.hpp"
#include "ipl/graph.hpp"
#include "ipl/search.hpp"

namespace ipl {

// One labeled training pair: a sequent and the return of a policy rollout
// from it, tagged with the seed theorem it was derived from.
struct Example {
  Sequent sequent;
  double ret = 0.0;
  int origin = 0;
  bool one_step = false;
  int depth = 0;
};

struct Dataset {
  std::vector<Example> examples;
  std::size_t size() const { return examples.size(); }
  int max_var_index() const;
};

struct DatasetSplits {
  Dataset train, val, test;
};

enum class ModelKind { Bow, GnnVm, GnnTm };

const char* model_kind_name(ModelKind kind);
std::optional<ModelKind> model_kind_from_name(const std::string& name);

// A trainable value function. The flat parameter vector is the declared
// serialization order; loss is the squared error of one example.
class ValueModel : public ValueFunction {
 public:
  virtual ModelKind kind() const = 0;
  virtual std::unique_ptr<ValueModel> clone() const = 0;
  virtual void save(std::ostream& out) const = 0;

  virtual Eigen::VectorXd flat_params() const = 0;
  virtual void set_flat_params(const Eigen::VectorXd& params) = 0;
  virtual double loss(const Example& ex) const = 0;
  // Returns the loss and accumulates d(loss)/d(params) into grad.
  virtual double loss_grad(const Example& ex, Eigen::VectorXd& grad) const = 0;

  static std::unique_ptr<ValueModel> load(std::istream& in);
};

void save_params(const ValueModel& model, const std::string& path);
std::unique_ptr<ValueModel> load_params(const std::string& path);

// Linear predictor over per-side token counts, output clamped to [0,1].
class BowModel final : public ValueModel {
 public:
  explicit BowModel(int max_var_index);

  // Antecedent-side counts of P1..Pm, Bottom, And, Or, Imp, then the same
  // for the consequent side. Throws when a variable index exceeds m.
  static Eigen::VectorXd features(const Sequent& s, int max_var_index);

  int max_var_index() const { return max_var_; }
  Eigen::VectorXd& weights() { return weights_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double& bias() { return bias_; }
  double bias() const { return bias_; }

  double evaluate(const Sequent& s) const override;
  ModelKind kind() const override { return ModelKind::Bow; }
  std::unique_ptr<ValueModel> clone() const override;
  void save(std::ostream& out) const override;
  static std::unique_ptr<BowModel> load_body(std::istream& in);

  Eigen::VectorXd flat_params() const override;
  void set_flat_params(const Eigen::VectorXd& params) override;
  double loss(const Example& ex) const override;
  double loss_grad(const Example& ex, Eigen::VectorXd& grad) const override;

 private:
  int max_var_;
  Eigen::VectorXd weights_;
  double bias_ = 0.0;
};

// Gated GNN over the VM or TM encoding: T message-passing steps with
// GRU-style vertex updates, sum pooling, and a one-hidden-layer readout
// ending in a sigmoid.
class GnnModel final : public ValueModel {
 public:
  GnnModel(GraphFormat format, int hidden, int steps, std::uint64_t init_seed);

  GraphFormat format() const { return format_; }
  int hidden() const { return hidden_; }
  int steps() const { return steps_; }

  double evaluate(const Sequent& s) const override;
  double evaluate_graph(const LabeledGraph& g) const;

  // Final per-vertex embeddings h^T (h^0 when steps() is 0).
  std::vector<Eigen::VectorXd> propagate(const LabeledGraph& g) const;

  ModelKind kind() const override {
    return format_ == GraphFormat::VM ? ModelKind::GnnVm : ModelKind::GnnTm;
  }
  std::unique_ptr<ValueModel> clone() const override;
  void save(std::ostream& out) const override;
  static std::unique_ptr<GnnModel> load_body(std::istream& in);

  Eigen::VectorXd flat_params() const override;
  void set_flat_params(const Eigen::VectorXd& params) override;
  double loss(const Example& ex) const override;
  double loss_grad(const Example& ex, Eigen::VectorXd& grad) const override;

  // Graph-level variants so training can encode each example once.
  double loss_graph(const LabeledGraph& g, double target) const;
  double loss_grad_graph(const LabeledGraph& g, double target,
                         Eigen::VectorXd& grad) const;

  // Tape-based forward; exists so tests can pin it against the plain path.
  double forward_tape_value(const LabeledGraph& g) const;

 private:
  ad::Tape::NodeId forward_tape(ad::Tape& tape, const LabeledGraph& g) const;
  double forward_plain(const LabeledGraph& g,
                       std::vector<Eigen::VectorXd>* embeddings_out) const;

  GraphFormat format_;
  int hidden_;
  int steps_;
  ad::ParamStore store_;
  // Parameter ids, in declared (= serialized) order.
  int embed_[6];
  int msg_w_[4];  // out-Left, out-Right, in-Left, in-Right
  int msg_b_;
  int gate_wz_, gate_uz_, gate_wr_, gate_ur_, gate_wc_, gate_uc_;
  int read_w_, read_b_, out_w_, out_b_;
};

struct TrainOptions {
  int epochs = 10;
  double learning_rate = 0.001;
  int batch_size = 32;
  std::uint64_t seed = 0;
  int threads = 1;
  int gnn_hidden = 16;
  int gnn_steps = 6;
};

struct EpochMetrics {
  double train_mse, val_mse, test_mse;
};

struct TrainMetrics {
  std::vector<EpochMetrics> epochs;
  double final_test_mse = 0.0;
};

// Mini-batch Adam on the mean squared error. Deterministic given the seed
// (initialization, shuffling, and the fixed gradient reduction order).
// Throws on an empty training split.
std::unique_ptr<ValueModel> train_model(ModelKind kind, const DatasetSplits& splits,
                                        const TrainOptions& opts,
                                        TrainMetrics* metrics = nullptr);

double dataset_mse(const ValueModel& model, const Dataset& data, int threads = 1);

// Best constant predictor baseline: variance of the returns around their mean.
double best_constant_mse(const Dataset& data);

// Max relative error between analytic and central-difference loss gradients.
double gradient_check(ValueModel& model, const Example& ex, double epsilon);

}  // namespace ipl
