#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ipl::ad {

// Named dense tensors with a flat column-major view in declaration order.
// The flat order is also the serialization order.
class ParamStore {
 public:
  int add(int rows, int cols);

  Eigen::MatrixXd& tensor(int id) { return tensors_[id]; }
  const Eigen::MatrixXd& tensor(int id) const { return tensors_[id]; }
  std::size_t offset(int id) const { return offsets_[id]; }
  int count() const { return static_cast<int>(tensors_.size()); }

  std::size_t flat_size() const { return flat_size_; }
  Eigen::VectorXd flat_params() const;
  void set_flat_params(const Eigen::VectorXd& flat);
  void add_flat_param(std::size_t i, double delta);

 private:
  std::vector<Eigen::MatrixXd> tensors_;
  std::vector<std::size_t> offsets_;
  std::size_t flat_size_ = 0;
};

// Reverse-mode tape over column vectors; scalars are 1-vectors. Parameters
// live in an external ParamStore; backward() accumulates parameter gradients
// into a caller-owned flat buffer, so concurrent tapes over shared read-only
// parameters are safe.
class Tape {
 public:
  explicit Tape(const ParamStore& params) : params_(&params) {}
  using NodeId = std::int32_t;

  void clear();

  NodeId param(int param_id);                       // H x 1 tensor as a leaf
  NodeId matvec(int param_id, NodeId x);            // W * x
  NodeId add(NodeId a, NodeId b);
  NodeId add_n(const std::vector<NodeId>& terms);   // fixed-order summation
  NodeId add_param(NodeId a, int param_id);         // a + bias
  NodeId sigmoid(NodeId x);
  NodeId tanh(NodeId x);
  NodeId relu(NodeId x);
  NodeId hadamard(NodeId a, NodeId b);
  NodeId one_minus(NodeId x);
  NodeId dot_param(int param_id, NodeId x);         // w . x as a 1-vector

  const Eigen::VectorXd& value(NodeId id) const { return nodes_[id].value; }
  double scalar(NodeId id) const { return nodes_[id].value(0); }

  // Seeds d(out)/d(out) = seed; grads must have ParamStore::flat_size entries.
  void backward(NodeId output, double seed, Eigen::VectorXd& grads) const;

 private:
  enum class OpKind : std::uint8_t {
    Param, MatVec, Add, AddN, AddParam, Sigmoid, Tanh, Relu,
    Hadamard, OneMinus, DotParam,
  };
  struct Node {
    OpKind op;
    int param_id = -1;
    NodeId a = -1, b = -1;
    std::int32_t extra_begin = 0, extra_count = 0;  // AddN inputs
    Eigen::VectorXd value;
  };

  NodeId push(Node node);

  const ParamStore* params_;
  std::vector<Node> nodes_;
  std::vector<NodeId> extras_;
};

}  // namespace ipl::ad
