#include "ipl/autodiff.hpp"

#include <cmath>
#include <stdexcept>

namespace ipl::ad {

int ParamStore::add(int rows, int cols) {
  tensors_.emplace_back(Eigen::MatrixXd::Zero(rows, cols));
  offsets_.push_back(flat_size_);
  flat_size_ += static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  return static_cast<int>(tensors_.size()) - 1;
}

Eigen::VectorXd ParamStore::flat_params() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(flat_size_));
  std::size_t at = 0;
  for (const auto& t : tensors_) {
    for (Eigen::Index c = 0; c < t.cols(); ++c)
      for (Eigen::Index r = 0; r < t.rows(); ++r)
        out(static_cast<Eigen::Index>(at++)) = t(r, c);
  }
  return out;
}

void ParamStore::set_flat_params(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != flat_size_)
    throw std::invalid_argument("flat parameter size mismatch");
  std::size_t at = 0;
  for (auto& t : tensors_) {
    for (Eigen::Index c = 0; c < t.cols(); ++c)
      for (Eigen::Index r = 0; r < t.rows(); ++r)
        t(r, c) = flat(static_cast<Eigen::Index>(at++));
  }
}

void ParamStore::add_flat_param(std::size_t i, double delta) {
  for (std::size_t t = 0; t < tensors_.size(); ++t) {
    std::size_t size = static_cast<std::size_t>(tensors_[t].size());
    if (i < offsets_[t] + size) {
      std::size_t local = i - offsets_[t];
      std::size_t rows = static_cast<std::size_t>(tensors_[t].rows());
      tensors_[t](static_cast<Eigen::Index>(local % rows),
                  static_cast<Eigen::Index>(local / rows)) += delta;
      return;
    }
  }
  throw std::out_of_range("flat parameter index out of range");
}

void Tape::clear() {
  nodes_.clear();
  extras_.clear();
}

Tape::NodeId Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size()) - 1;
}

Tape::NodeId Tape::param(int param_id) {
  Node n;
  n.op = OpKind::Param;
  n.param_id = param_id;
  n.value = params_->tensor(param_id).col(0);
  return push(std::move(n));
}

Tape::NodeId Tape::matvec(int param_id, NodeId x) {
  Node n;
  n.op = OpKind::MatVec;
  n.param_id = param_id;
  n.a = x;
  n.value = params_->tensor(param_id) * nodes_[x].value;
  return push(std::move(n));
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
  Node n;
  n.op = OpKind::Add;
  n.a = a;
  n.b = b;
  n.value = nodes_[a].value + nodes_[b].value;
  return push(std::move(n));
}

Tape::NodeId Tape::add_n(const std::vector<NodeId>& terms) {
  if (terms.empty()) throw std::invalid_argument("add_n needs at least one term");
  Node n;
  n.op = OpKind::AddN;
  n.extra_begin = static_cast<std::int32_t>(extras_.size());
  n.extra_count = static_cast<std::int32_t>(terms.size());
  extras_.insert(extras_.end(), terms.begin(), terms.end());
  n.value = nodes_[terms[0]].value;
  for (std::size_t i = 1; i < terms.size(); ++i) n.value += nodes_[terms[i]].value;
  return push(std::move(n));
}

Tape::NodeId Tape::add_param(NodeId a, int param_id) {
  Node n;
  n.op = OpKind::AddParam;
  n.param_id = param_id;
  n.a = a;
  n.value = nodes_[a].value + params_->tensor(param_id).col(0);
  return push(std::move(n));
}

Tape::NodeId Tape::sigmoid(NodeId x) {
  Node n;
  n.op = OpKind::Sigmoid;
  n.a = x;
  n.value = nodes_[x].value.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  return push(std::move(n));
}

Tape::NodeId Tape::tanh(NodeId x) {
  Node n;
  n.op = OpKind::Tanh;
  n.a = x;
  n.value = nodes_[x].value.unaryExpr([](double v) { return std::tanh(v); });
  return push(std::move(n));
}

Tape::NodeId Tape::relu(NodeId x) {
  Node n;
  n.op = OpKind::Relu;
  n.a = x;
  n.value = nodes_[x].value.cwiseMax(0.0);
  return push(std::move(n));
}

Tape::NodeId Tape::hadamard(NodeId a, NodeId b) {
  Node n;
  n.op = OpKind::Hadamard;
  n.a = a;
  n.b = b;
  n.value = nodes_[a].value.cwiseProduct(nodes_[b].value);
  return push(std::move(n));
}

Tape::NodeId Tape::one_minus(NodeId x) {
  Node n;
  n.op = OpKind::OneMinus;
  n.a = x;
  n.value = (1.0 - nodes_[x].value.array()).matrix();
  return push(std::move(n));
}

Tape::NodeId Tape::dot_param(int param_id, NodeId x) {
  Node n;
  n.op = OpKind::DotParam;
  n.param_id = param_id;
  n.a = x;
  n.value = Eigen::VectorXd::Constant(1, params_->tensor(param_id).col(0).dot(nodes_[x].value));
  return push(std::move(n));
}

void Tape::backward(NodeId output, double seed, Eigen::VectorXd& grads) const {
  if (static_cast<std::size_t>(grads.size()) != params_->flat_size())
    throw std::invalid_argument("gradient buffer size mismatch");

  std::vector<Eigen::VectorXd> adjoints(nodes_.size());
  auto adj = [&](NodeId id) -> Eigen::VectorXd& {
    if (adjoints[id].size() == 0)
      adjoints[id] = Eigen::VectorXd::Zero(nodes_[id].value.size());
    return adjoints[id];
  };
  auto grad_matrix = [&](int param_id) {
    const Eigen::MatrixXd& t = params_->tensor(param_id);
    return Eigen::Map<Eigen::MatrixXd>(
        grads.data() + params_->offset(param_id), t.rows(), t.cols());
  };

  adjoints[output] = Eigen::VectorXd::Constant(nodes_[output].value.size(), seed);

  for (NodeId id = output; id >= 0; --id) {
    const Node& n = nodes_[id];
    if (adjoints[id].size() == 0) continue;  // not on a path to the output
    const Eigen::VectorXd& g = adjoints[id];
    switch (n.op) {
      case OpKind::Param:
        grad_matrix(n.param_id).col(0) += g;
        break;
      case OpKind::MatVec:
        grad_matrix(n.param_id) += g * nodes_[n.a].value.transpose();
        adj(n.a) += params_->tensor(n.param_id).transpose() * g;
        break;
      case OpKind::Add:
        adj(n.a) += g;
        adj(n.b) += g;
        break;
      case OpKind::AddN:
        for (std::int32_t i = 0; i < n.extra_count; ++i)
          adj(extras_[n.extra_begin + i]) += g;
        break;
      case OpKind::AddParam:
        adj(n.a) += g;
        grad_matrix(n.param_id).col(0) += g;
        break;
      case OpKind::Sigmoid:
        adj(n.a) += g.cwiseProduct(
            (n.value.array() * (1.0 - n.value.array())).matrix());
        break;
      case OpKind::Tanh:
        adj(n.a) += g.cwiseProduct((1.0 - n.value.array().square()).matrix());
        break;
      case OpKind::Relu:
        adj(n.a) += g.cwiseProduct(
            (n.value.array() > 0.0).cast<double>().matrix());
        break;
      case OpKind::Hadamard:
        adj(n.a) += g.cwiseProduct(nodes_[n.b].value);
        adj(n.b) += g.cwiseProduct(nodes_[n.a].value);
        break;
      case OpKind::OneMinus:
        adj(n.a) -= g;
        break;
      case OpKind::DotParam:
        grad_matrix(n.param_id).col(0) += g(0) * nodes_[n.a].value;
        adj(n.a) += g(0) * params_->tensor(n.param_id).col(0);
        break;
    }
  }
}

}  // namespace ipl::ad
