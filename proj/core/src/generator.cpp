#include "ipl/generator.hpp"

#include <fstream>
#include <sstream>

namespace ipl {

Formula random_formula(int n, int m, const OpProbs& q, Rng& rng) {
  if (n < 1) throw std::invalid_argument("desired length must be >= 1");
  if (m < 1) throw std::invalid_argument("variable count must be >= 1");
  if (n <= 2)
    return Formula::var(static_cast<int>(rng.uniform_int(1, m)));

  double draw = rng.next_double();
  int op = 3;
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    acc += q[static_cast<std::size_t>(i)];
    if (draw < acc) {
      op = i;
      break;
    }
  }
  if (op == 3) return Formula::neg(random_formula(n - 1, m, q, rng));

  int x = static_cast<int>(rng.uniform_int(1, n - 2));
  Formula lhs = random_formula(x, m, q, rng);
  Formula rhs = random_formula(n - 1 - x, m, q, rng);
  switch (op) {
    case 0: return Formula::conj(std::move(lhs), std::move(rhs));
    case 1: return Formula::disj(std::move(lhs), std::move(rhs));
    default: return Formula::imp(std::move(lhs), std::move(rhs));
  }
}

OpProbs sample_op_probs(double alpha, Rng& rng) { return rng.dirichlet4(alpha); }

std::vector<Sequent> build_library(const GeneratorConfig& cfg, Rng& rng,
                                   LibraryStats* stats) {
  std::vector<Sequent> out;
  LibraryStats local;
  std::int64_t max_attempts =
      cfg.max_attempts > 0 ? cfg.max_attempts : 1000LL * std::max(cfg.count, 1);
  Decider decider;

  while (static_cast<int>(out.size()) < cfg.count) {
    if (local.attempts >= max_attempts)
      throw std::runtime_error("library generation stalled after " +
                               std::to_string(local.attempts) + " attempts");
    ++local.attempts;
    int n = static_cast<int>(rng.uniform_int(cfg.n_min, cfg.n_max));
    int m = static_cast<int>(rng.uniform_int(cfg.m_min, cfg.m_max));
    OpProbs q = sample_op_probs(cfg.dirichlet_alpha, rng);
    Formula candidate = random_formula(n, m, q, rng);
    Sequent goal({}, candidate);
    DecideResult res = decider.decide(goal, cfg.decide_budget);
    if (res.verdict == Verdict::Provable) {
      out.push_back(std::move(goal));
    } else if (res.verdict == Verdict::Unprovable) {
      ++local.rejected_unprovable;
    } else {
      ++local.rejected_budget;
    }
  }
  if (stats) *stats = local;
  return out;
}

void write_library(const std::vector<Sequent>& library, const GeneratorConfig& cfg,
                   std::ostream& out) {
  out << "# ipl theorem library\n";
  out << "# count " << cfg.count << " n [" << cfg.n_min << "," << cfg.n_max
      << "] m [" << cfg.m_min << "," << cfg.m_max << "] alpha "
      << cfg.dirichlet_alpha << " budget " << cfg.decide_budget << " seed "
      << cfg.seed << "\n";
  for (const Sequent& s : library) out << s.consequent().text() << "\n";
}

std::vector<Sequent> read_library(std::istream& in) {
  std::vector<Sequent> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(Sequent({}, parse_formula(line)));
  }
  return out;
}

void save_library(const std::vector<Sequent>& library, const GeneratorConfig& cfg,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write library file: " + path);
  write_library(library, cfg, out);
}

std::vector<Sequent> load_library(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read library file: " + path);
  return read_library(in);
}

}  // namespace ipl
