#include "ipl/value_model.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ipl/parallel.hpp"
#include "ipl/rng.hpp"

namespace ipl {

namespace {

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

void count_tokens(const Formula& f, int max_var, Eigen::VectorXd& out, int base) {
  // Layout per side: P1..Pm, Bottom, And, Or, Imp.
  switch (f.op()) {
    case Op::Var: {
      int idx = f.var_index();
      if (idx > max_var)
        throw std::invalid_argument("variable index " + std::to_string(idx) +
                                    " exceeds model limit " + std::to_string(max_var));
      out(base + idx - 1) += 1.0;
      return;
    }
    case Op::Bottom:
      out(base + max_var) += 1.0;
      return;
    case Op::And:
      out(base + max_var + 1) += 1.0;
      break;
    case Op::Or:
      out(base + max_var + 2) += 1.0;
      break;
    default:
      out(base + max_var + 3) += 1.0;
      break;
  }
  count_tokens(f.left(), max_var, out, base);
  count_tokens(f.right(), max_var, out, base);
}

constexpr const char* kMagic = "ipl-value-model v1";

void write_double(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%a", v);
  out << buf << "\n";
}

double read_double(std::istream& in) {
  std::string token;
  if (!(in >> token)) throw std::runtime_error("malformed model file: truncated weights");
  std::size_t used = 0;
  double v = std::stod(token, &used);
  if (used != token.size())
    throw std::runtime_error("malformed model file: bad weight '" + token + "'");
  return v;
}

std::string read_field(std::istream& in, const std::string& key) {
  std::string k, v;
  if (!(in >> k >> v) || k != key)
    throw std::runtime_error("malformed model file: expected field '" + key + "'");
  return v;
}

void expect_params_and_read(std::istream& in, ad::ParamStore& store) {
  std::string declared = read_field(in, "params");
  std::size_t n = std::stoull(declared);
  if (n != store.flat_size())
    throw std::runtime_error("model shape mismatch: file declares " + declared +
                             " weights, expected " + std::to_string(store.flat_size()));
  Eigen::VectorXd flat(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) flat(static_cast<Eigen::Index>(i)) = read_double(in);
  std::string tail;
  if (!(in >> tail) || tail != "end")
    throw std::runtime_error("malformed model file: missing end marker");
  store.set_flat_params(flat);
}

}  // namespace

int Dataset::max_var_index() const {
  int best = 0;
  for (const Example& ex : examples) {
    std::vector<const Formula*> stack;
    for (const Formula& a : ex.sequent.antecedents()) stack.push_back(&a);
    stack.push_back(&ex.sequent.consequent());
    while (!stack.empty()) {
      const Formula* f = stack.back();
      stack.pop_back();
      if (f->op() == Op::Var) {
        best = std::max(best, f->var_index());
      } else if (!f->is_atomic()) {
        stack.push_back(&f->left());
        stack.push_back(&f->right());
      }
    }
  }
  return best;
}

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Bow: return "bow";
    case ModelKind::GnnVm: return "gnn-vm";
    default: return "gnn-tm";
  }
}

std::optional<ModelKind> model_kind_from_name(const std::string& name) {
  if (name == "bow") return ModelKind::Bow;
  if (name == "gnn-vm") return ModelKind::GnnVm;
  if (name == "gnn-tm") return ModelKind::GnnTm;
  return std::nullopt;
}

// --- BowModel ---------------------------------------------------------------

BowModel::BowModel(int max_var_index) : max_var_(max_var_index) {
  if (max_var_index < 1) throw std::invalid_argument("max_var_index must be >= 1");
  weights_ = Eigen::VectorXd::Zero(2 * (max_var_index + 4));
}

Eigen::VectorXd BowModel::features(const Sequent& s, int max_var_index) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * (max_var_index + 4));
  for (const Formula& a : s.antecedents()) count_tokens(a, max_var_index, out, 0);
  count_tokens(s.consequent(), max_var_index, out, max_var_index + 4);
  return out;
}

double BowModel::evaluate(const Sequent& s) const {
  return clamp01(weights_.dot(features(s, max_var_)) + bias_);
}

std::unique_ptr<ValueModel> BowModel::clone() const {
  return std::make_unique<BowModel>(*this);
}

Eigen::VectorXd BowModel::flat_params() const {
  Eigen::VectorXd out(weights_.size() + 1);
  out.head(weights_.size()) = weights_;
  out(weights_.size()) = bias_;
  return out;
}

void BowModel::set_flat_params(const Eigen::VectorXd& params) {
  if (params.size() != weights_.size() + 1)
    throw std::invalid_argument("flat parameter size mismatch");
  weights_ = params.head(weights_.size());
  bias_ = params(weights_.size());
}

double BowModel::loss(const Example& ex) const {
  double diff = evaluate(ex.sequent) - ex.ret;
  return diff * diff;
}

double BowModel::loss_grad(const Example& ex, Eigen::VectorXd& grad) const {
  Eigen::VectorXd v = features(ex.sequent, max_var_);
  double raw = weights_.dot(v) + bias_;
  double value = clamp01(raw);
  double diff = value - ex.ret;
  // The clamp blocks gradient outside the open unit interval.
  if (raw > 0.0 && raw < 1.0) {
    grad.head(weights_.size()) += 2.0 * diff * v;
    grad(weights_.size()) += 2.0 * diff;
  }
  return diff * diff;
}

void BowModel::save(std::ostream& out) const {
  out << kMagic << "\n";
  out << "kind bow\n";
  out << "max_var " << max_var_ << "\n";
  out << "params " << weights_.size() + 1 << "\n";
  for (Eigen::Index i = 0; i < weights_.size(); ++i) write_double(out, weights_(i));
  write_double(out, bias_);
  out << "end\n";
}

std::unique_ptr<BowModel> BowModel::load_body(std::istream& in) {
  int max_var = std::stoi(read_field(in, "max_var"));
  auto model = std::make_unique<BowModel>(max_var);
  std::string declared = read_field(in, "params");
  std::size_t n = std::stoull(declared);
  if (n != static_cast<std::size_t>(model->weights_.size()) + 1)
    throw std::runtime_error("model shape mismatch: file declares " + declared +
                             " weights for max_var " + std::to_string(max_var));
  Eigen::VectorXd flat(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) flat(static_cast<Eigen::Index>(i)) = read_double(in);
  std::string tail;
  if (!(in >> tail) || tail != "end")
    throw std::runtime_error("malformed model file: missing end marker");
  model->set_flat_params(flat);
  return model;
}

// --- GnnModel ---------------------------------------------------------------

GnnModel::GnnModel(GraphFormat format, int hidden, int steps, std::uint64_t init_seed)
    : format_(format), hidden_(hidden), steps_(steps) {
  if (hidden < 1 || steps < 0) throw std::invalid_argument("bad GNN dimensions");
  const int h = hidden;
  for (int i = 0; i < 6; ++i) embed_[i] = store_.add(h, 1);
  for (int i = 0; i < 4; ++i) msg_w_[i] = store_.add(h, h);
  msg_b_ = store_.add(h, 1);
  gate_wz_ = store_.add(h, h);
  gate_uz_ = store_.add(h, h);
  gate_wr_ = store_.add(h, h);
  gate_ur_ = store_.add(h, h);
  gate_wc_ = store_.add(h, h);
  gate_uc_ = store_.add(h, h);
  read_w_ = store_.add(h, h);
  read_b_ = store_.add(h, 1);
  out_w_ = store_.add(h, 1);
  out_b_ = store_.add(1, 1);

  // Glorot uniform per tensor, biases zero, in declared order.
  Rng rng(init_seed);
  for (int id = 0; id < store_.count(); ++id) {
    if (id == msg_b_ || id == read_b_ || id == out_b_) continue;
    Eigen::MatrixXd& t = store_.tensor(id);
    double bound = std::sqrt(6.0 / static_cast<double>(t.rows() + t.cols()));
    for (Eigen::Index c = 0; c < t.cols(); ++c)
      for (Eigen::Index r = 0; r < t.rows(); ++r)
        t(r, c) = rng.uniform_real(-bound, bound);
  }
}

namespace {

// Per-vertex message contributions: (transform id, neighbor vertex), in edge
// list order. Transform ids: 0 out-Left, 1 out-Right, 2 in-Left, 3 in-Right.
std::vector<std::vector<std::pair<int, int>>> message_plan(const LabeledGraph& g) {
  std::vector<std::vector<std::pair<int, int>>> plan(g.vertex_count());
  for (const auto& e : g.edges) {
    int lab = e.label == EdgeLabel::Left ? 0 : 1;
    plan[static_cast<std::size_t>(e.source)].push_back({lab, e.target});
    plan[static_cast<std::size_t>(e.target)].push_back({2 + lab, e.source});
  }
  return plan;
}

int embed_index(VertexLabel label) { return static_cast<int>(label); }

}  // namespace

ad::Tape::NodeId GnnModel::forward_tape(ad::Tape& tape, const LabeledGraph& g) const {
  const std::size_t n = g.vertex_count();
  auto plan = message_plan(g);

  std::vector<ad::Tape::NodeId> h(n);
  for (std::size_t v = 0; v < n; ++v)
    h[v] = tape.param(embed_[embed_index(g.vertices[v])]);

  std::vector<ad::Tape::NodeId> next(n);
  for (int t = 0; t < steps_; ++t) {
    for (std::size_t v = 0; v < n; ++v) {
      ad::Tape::NodeId m;
      if (plan[v].empty()) {
        m = tape.param(msg_b_);
      } else {
        std::vector<ad::Tape::NodeId> terms;
        terms.reserve(plan[v].size());
        for (const auto& [tid, w] : plan[v])
          terms.push_back(tape.matvec(msg_w_[tid], h[w]));
        m = tape.add_param(tape.add_n(terms), msg_b_);
      }
      auto z = tape.sigmoid(tape.add(tape.matvec(gate_wz_, m), tape.matvec(gate_uz_, h[v])));
      auto r = tape.sigmoid(tape.add(tape.matvec(gate_wr_, m), tape.matvec(gate_ur_, h[v])));
      auto cand = tape.tanh(tape.add(tape.matvec(gate_wc_, m),
                                     tape.matvec(gate_uc_, tape.hadamard(r, h[v]))));
      next[v] = tape.add(tape.hadamard(tape.one_minus(z), h[v]), tape.hadamard(z, cand));
    }
    h = next;
  }

  auto pooled = tape.add_n(h);
  auto hidden = tape.relu(tape.add_param(tape.matvec(read_w_, pooled), read_b_));
  return tape.sigmoid(tape.add_param(tape.dot_param(out_w_, hidden), out_b_));
}

double GnnModel::forward_plain(const LabeledGraph& g,
                               std::vector<Eigen::VectorXd>* embeddings_out) const {
  const std::size_t n = g.vertex_count();
  auto plan = message_plan(g);
  auto sig = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(
        x.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); }));
  };

  std::vector<Eigen::VectorXd> h(n);
  for (std::size_t v = 0; v < n; ++v)
    h[v] = store_.tensor(embed_[embed_index(g.vertices[v])]).col(0);

  std::vector<Eigen::VectorXd> next(n);
  for (int t = 0; t < steps_; ++t) {
    for (std::size_t v = 0; v < n; ++v) {
      Eigen::VectorXd m;
      if (plan[v].empty()) {
        m = store_.tensor(msg_b_).col(0);
      } else {
        m = store_.tensor(msg_w_[plan[v][0].first]) * h[plan[v][0].second];
        for (std::size_t i = 1; i < plan[v].size(); ++i)
          m += store_.tensor(msg_w_[plan[v][i].first]) * h[plan[v][i].second];
        m += store_.tensor(msg_b_).col(0);
      }
      Eigen::VectorXd z = sig(Eigen::VectorXd(store_.tensor(gate_wz_) * m) +
                              Eigen::VectorXd(store_.tensor(gate_uz_) * h[v]));
      Eigen::VectorXd r = sig(Eigen::VectorXd(store_.tensor(gate_wr_) * m) +
                              Eigen::VectorXd(store_.tensor(gate_ur_) * h[v]));
      Eigen::VectorXd rh = r.cwiseProduct(h[v]);
      Eigen::VectorXd cand = (Eigen::VectorXd(store_.tensor(gate_wc_) * m) +
                              Eigen::VectorXd(store_.tensor(gate_uc_) * rh))
                                 .unaryExpr([](double x) { return std::tanh(x); });
      next[v] = Eigen::VectorXd((1.0 - z.array()).matrix().cwiseProduct(h[v])) +
                Eigen::VectorXd(z.cwiseProduct(cand));
    }
    h = next;
  }

  if (embeddings_out) *embeddings_out = h;

  Eigen::VectorXd pooled = h[0];
  for (std::size_t v = 1; v < n; ++v) pooled += h[v];
  Eigen::VectorXd hidden =
      (Eigen::VectorXd(store_.tensor(read_w_) * pooled) + store_.tensor(read_b_).col(0))
          .cwiseMax(0.0);
  double raw = store_.tensor(out_w_).col(0).dot(hidden) + store_.tensor(out_b_)(0, 0);
  return 1.0 / (1.0 + std::exp(-raw));
}

double GnnModel::evaluate(const Sequent& s) const {
  return forward_plain(to_graph(s, format_), nullptr);
}

double GnnModel::evaluate_graph(const LabeledGraph& g) const {
  return forward_plain(g, nullptr);
}

std::vector<Eigen::VectorXd> GnnModel::propagate(const LabeledGraph& g) const {
  std::vector<Eigen::VectorXd> h;
  forward_plain(g, &h);
  return h;
}

double GnnModel::forward_tape_value(const LabeledGraph& g) const {
  ad::Tape tape(store_);
  return tape.scalar(forward_tape(tape, g));
}

std::unique_ptr<ValueModel> GnnModel::clone() const {
  return std::make_unique<GnnModel>(*this);
}

Eigen::VectorXd GnnModel::flat_params() const { return store_.flat_params(); }

void GnnModel::set_flat_params(const Eigen::VectorXd& params) {
  store_.set_flat_params(params);
}

double GnnModel::loss(const Example& ex) const {
  return loss_graph(to_graph(ex.sequent, format_), ex.ret);
}

double GnnModel::loss_grad(const Example& ex, Eigen::VectorXd& grad) const {
  return loss_grad_graph(to_graph(ex.sequent, format_), ex.ret, grad);
}

double GnnModel::loss_graph(const LabeledGraph& g, double target) const {
  double diff = forward_plain(g, nullptr) - target;
  return diff * diff;
}

double GnnModel::loss_grad_graph(const LabeledGraph& g, double target,
                                 Eigen::VectorXd& grad) const {
  ad::Tape tape(store_);
  auto out = forward_tape(tape, g);
  double diff = tape.scalar(out) - target;
  tape.backward(out, 2.0 * diff, grad);
  return diff * diff;
}

void GnnModel::save(std::ostream& out) const {
  out << kMagic << "\n";
  out << "kind gnn\n";
  out << "format " << graph_format_name(format_) << "\n";
  out << "hidden " << hidden_ << "\n";
  out << "steps " << steps_ << "\n";
  out << "params " << store_.flat_size() << "\n";
  Eigen::VectorXd flat = store_.flat_params();
  for (Eigen::Index i = 0; i < flat.size(); ++i) write_double(out, flat(i));
  out << "end\n";
}

std::unique_ptr<GnnModel> GnnModel::load_body(std::istream& in) {
  std::string format = read_field(in, "format");
  if (format != "vm" && format != "tm")
    throw std::runtime_error("malformed model file: unknown graph format " + format);
  int hidden = std::stoi(read_field(in, "hidden"));
  int steps = std::stoi(read_field(in, "steps"));
  auto model = std::make_unique<GnnModel>(
      format == "vm" ? GraphFormat::VM : GraphFormat::TM, hidden, steps, 0);
  expect_params_and_read(in, model->store_);
  return model;
}

// --- Serialization dispatch --------------------------------------------------

std::unique_ptr<ValueModel> ValueModel::load(std::istream& in) {
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagic)
    throw std::runtime_error("unsupported model file version: '" + magic + "'");
  std::string kind = read_field(in, "kind");
  if (kind == "bow") return BowModel::load_body(in);
  if (kind == "gnn") return GnnModel::load_body(in);
  throw std::runtime_error("kind mismatch: unknown model kind '" + kind + "'");
}

void save_params(const ValueModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  model.save(out);
}

std::unique_ptr<ValueModel> load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read model file: " + path);
  return ValueModel::load(in);
}

// --- Training ----------------------------------------------------------------

namespace {

struct PreparedData {
  // Exactly one of graphs/features is populated, matching the model kind.
  std::vector<LabeledGraph> graphs;
  std::vector<Eigen::VectorXd> features;
  std::vector<double> targets;
};

PreparedData prepare(const Dataset& data, const ValueModel& model, int threads) {
  PreparedData out;
  out.targets.reserve(data.size());
  for (const Example& ex : data.examples) out.targets.push_back(ex.ret);
  if (const auto* gnn = dynamic_cast<const GnnModel*>(&model)) {
    out.graphs.resize(data.size());
    parallel_for(data.size(), threads, [&](std::size_t i) {
      out.graphs[i] = to_graph(data.examples[i].sequent, gnn->format());
    });
  } else {
    const auto* bow = dynamic_cast<const BowModel*>(&model);
    out.features.resize(data.size());
    parallel_for(data.size(), threads, [&](std::size_t i) {
      out.features[i] = BowModel::features(data.examples[i].sequent, bow->max_var_index());
    });
  }
  return out;
}

double prepared_loss(const ValueModel& model, const PreparedData& data, std::size_t i) {
  if (!data.graphs.empty()) {
    return static_cast<const GnnModel&>(model).loss_graph(data.graphs[i], data.targets[i]);
  }
  const auto& bow = static_cast<const BowModel&>(model);
  double raw = bow.weights().dot(data.features[i]) + bow.bias();
  double diff = clamp01(raw) - data.targets[i];
  return diff * diff;
}

double prepared_loss_grad(const ValueModel& model, const PreparedData& data,
                          std::size_t i, Eigen::VectorXd& grad) {
  if (!data.graphs.empty()) {
    return static_cast<const GnnModel&>(model).loss_grad_graph(data.graphs[i],
                                                               data.targets[i], grad);
  }
  const auto& bow = static_cast<const BowModel&>(model);
  Eigen::Index dim = data.features[i].size();
  double raw = bow.weights().dot(data.features[i]) + bow.bias();
  double value = clamp01(raw);
  double diff = value - data.targets[i];
  if (raw > 0.0 && raw < 1.0) {
    grad.head(dim) += 2.0 * diff * data.features[i];
    grad(dim) += 2.0 * diff;
  }
  return diff * diff;
}

double mean_loss(const ValueModel& model, const PreparedData& data, int threads) {
  if (data.targets.empty()) return 0.0;
  std::vector<double> losses(data.targets.size());
  parallel_for(data.targets.size(), threads, [&](std::size_t i) {
    losses[i] = prepared_loss(model, data, i);
  });
  double total = 0.0;
  for (double l : losses) total += l;
  return total / static_cast<double>(losses.size());
}

}  // namespace

std::unique_ptr<ValueModel> train_model(ModelKind kind, const DatasetSplits& splits,
                                        const TrainOptions& opts, TrainMetrics* metrics) {
  if (splits.train.examples.empty())
    throw std::invalid_argument("training split is empty");

  std::unique_ptr<ValueModel> model;
  switch (kind) {
    case ModelKind::Bow: {
      int m = std::max({splits.train.max_var_index(), splits.val.max_var_index(),
                        splits.test.max_var_index(), 1});
      model = std::make_unique<BowModel>(m);
      break;
    }
    case ModelKind::GnnVm:
      model = std::make_unique<GnnModel>(GraphFormat::VM, opts.gnn_hidden,
                                         opts.gnn_steps, opts.seed);
      break;
    case ModelKind::GnnTm:
      model = std::make_unique<GnnModel>(GraphFormat::TM, opts.gnn_hidden,
                                         opts.gnn_steps, opts.seed);
      break;
  }

  PreparedData train = prepare(splits.train, *model, opts.threads);
  PreparedData val = prepare(splits.val, *model, opts.threads);
  PreparedData test = prepare(splits.test, *model, opts.threads);

  const std::size_t n = splits.train.size();
  const std::size_t dim = static_cast<std::size_t>(model->flat_params().size());
  Eigen::VectorXd adam_m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  Eigen::VectorXd adam_v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  std::int64_t step = 0;

  Rng rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  if (metrics) metrics->epochs.clear();

  int threads = std::max(1, opts.threads);
  std::vector<Eigen::VectorXd> thread_grads(static_cast<std::size_t>(threads));

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t begin = 0; begin < n; begin += static_cast<std::size_t>(opts.batch_size)) {
      std::size_t end = std::min(n, begin + static_cast<std::size_t>(opts.batch_size));
      std::size_t batch = end - begin;

      // Fixed slicing: thread t accumulates its slice in index order, then
      // the slices are reduced in thread order.
      std::size_t used = std::min<std::size_t>(static_cast<std::size_t>(threads), batch);
      std::size_t chunk = (batch + used - 1) / used;
      for (std::size_t t = 0; t < used; ++t)
        thread_grads[t] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
      parallel_for(used, static_cast<int>(used), [&](std::size_t t) {
        std::size_t lo = begin + t * chunk;
        std::size_t hi = std::min(end, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i)
          prepared_loss_grad(*model, train, order[i], thread_grads[t]);
      });
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
      for (std::size_t t = 0; t < used; ++t) grad += thread_grads[t];
      grad /= static_cast<double>(batch);

      ++step;
      adam_m = beta1 * adam_m + (1.0 - beta1) * grad;
      adam_v = beta2 * adam_v + (1.0 - beta2) * grad.cwiseProduct(grad);
      double mhat_scale = 1.0 / (1.0 - std::pow(beta1, static_cast<double>(step)));
      double vhat_scale = 1.0 / (1.0 - std::pow(beta2, static_cast<double>(step)));
      Eigen::VectorXd params = model->flat_params();
      params -= opts.learning_rate * (adam_m * mhat_scale)
                    .cwiseQuotient(((adam_v * vhat_scale).cwiseSqrt().array() + adam_eps)
                                       .matrix());
      model->set_flat_params(params);
    }

    if (metrics) {
      EpochMetrics em;
      em.train_mse = mean_loss(*model, train, threads);
      em.val_mse = mean_loss(*model, val, threads);
      em.test_mse = mean_loss(*model, test, threads);
      metrics->epochs.push_back(em);
    }
  }

  if (metrics) {
    metrics->final_test_mse = metrics->epochs.empty()
                                  ? mean_loss(*model, test, threads)
                                  : metrics->epochs.back().test_mse;
  }
  return model;
}

double dataset_mse(const ValueModel& model, const Dataset& data, int threads) {
  if (data.examples.empty()) return 0.0;
  PreparedData prepared = prepare(data, model, threads);
  return mean_loss(model, prepared, threads);
}

double best_constant_mse(const Dataset& data) {
  if (data.examples.empty()) return 0.0;
  double mean = 0.0;
  for (const Example& ex : data.examples) mean += ex.ret;
  mean /= static_cast<double>(data.size());
  double mse = 0.0;
  for (const Example& ex : data.examples) mse += (ex.ret - mean) * (ex.ret - mean);
  return mse / static_cast<double>(data.size());
}

double gradient_check(ValueModel& model, const Example& ex, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be > 0");
  Eigen::VectorXd params = model.flat_params();
  Eigen::VectorXd analytic = Eigen::VectorXd::Zero(params.size());
  model.loss_grad(ex, analytic);

  double max_rel = 0.0;
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    Eigen::VectorXd perturbed = params;
    perturbed(i) = params(i) + epsilon;
    model.set_flat_params(perturbed);
    double plus = model.loss(ex);
    perturbed(i) = params(i) - epsilon;
    model.set_flat_params(perturbed);
    double minus = model.loss(ex);
    double numeric = (plus - minus) / (2.0 * epsilon);
    double denom = std::max(std::abs(analytic(i)) + std::abs(numeric), 1e-4);
    double rel = std::abs(analytic(i) - numeric) / denom;
    if (std::abs(analytic(i) - numeric) == 0.0) rel = 0.0;
    max_rel = std::max(max_rel, rel);
  }
  model.set_flat_params(params);
  return max_rel;
}

}  // namespace ipl
