#include "smpp/qaoa.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "smpp/rng.hpp"

namespace smpp {

namespace {

int qubit_count(Eigen::Index dim) {
  if (dim <= 0 || !std::has_single_bit(static_cast<std::uint64_t>(dim)))
    throw std::invalid_argument("state dimension must be a power of two");
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

void check_qubits(Eigen::Index n) {
  if (n > kMaxQaoaQubits)
    throw std::invalid_argument("QAOA: " + std::to_string(n) + " qubits exceeds the limit of " +
                                std::to_string(kMaxQaoaQubits));
}

void apply_mixer(StateVector& psi, int qubits, double beta) {
  const double c = std::cos(beta);
  const std::complex<double> mis(0.0, -std::sin(beta));
  const Eigen::Index dim = psi.size();
  for (int q = 0; q < qubits; ++q) {
    const Eigen::Index stride = Eigen::Index{1} << q;
    for (Eigen::Index base = 0; base < dim; base += 2 * stride)
      for (Eigen::Index k = base; k < base + stride; ++k) {
        const auto a0 = psi(k), a1 = psi(k + stride);
        psi(k) = c * a0 + mis * a1;
        psi(k + stride) = mis * a0 + c * a1;
      }
  }
}

}  // namespace

void QaoaParams::validate() const {
  if (gammas.size() != betas.size())
    throw std::invalid_argument("QAOA params: gamma/beta layer counts differ");
  if (gammas.empty()) throw std::invalid_argument("QAOA params: at least one layer required");
}

Eigen::VectorXd QaoaParams::packed() const {
  Eigen::VectorXd v(2 * gammas.size());
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    v(2 * k) = gammas[k];
    v(2 * k + 1) = betas[k];
  }
  return v;
}

QaoaParams QaoaParams::unpack(const Eigen::VectorXd& v) {
  QaoaParams p;
  for (Eigen::Index k = 0; k + 1 < v.size(); k += 2) {
    p.gammas.push_back(v(k));
    p.betas.push_back(v(k + 1));
  }
  return p;
}

Eigen::VectorXd energy_table(const Ising& ising) {
  const Eigen::Index n = ising.size();
  check_qubits(n);
  const Eigen::Index dim = Eigen::Index{1} << n;

  std::vector<std::vector<std::pair<Eigen::Index, double>>> adj(n);
  for (Eigen::Index col = 0; col < ising.j.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(ising.j, col); it; ++it)
      if (it.row() != col) adj[col].emplace_back(it.row(), it.value());

  // Gray-code walk; field_i = sum_j J_ij z_j.
  std::vector<double> z(n, 1.0), field(n, 0.0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (auto [j, v] : adj[i]) field[i] += v;
  double e = ising.offset + ising.h.sum();
  for (Eigen::Index i = 0; i < n; ++i) e += field[i];

  Eigen::VectorXd table(dim);
  Eigen::Index state = 0;
  table(0) = e;
  for (Eigen::Index k = 1; k < dim; ++k) {
    const int i = std::countr_zero(static_cast<std::uint64_t>(k));
    e += -2.0 * z[i] * (ising.h(i) + 2.0 * field[i]);
    z[i] = -z[i];
    for (auto [j, v] : adj[i]) field[j] += 2.0 * z[i] * v;
    state ^= Eigen::Index{1} << i;
    table(state) = e;
  }
  return table;
}

StateVector apply_ansatz(const Eigen::VectorXd& energies, const QaoaParams& params) {
  params.validate();
  const int qubits = qubit_count(energies.size());
  check_qubits(qubits);
  StateVector psi =
      StateVector::Constant(energies.size(), 1.0 / std::sqrt(static_cast<double>(energies.size())));
  for (int layer = 0; layer < params.layers(); ++layer) {
    const double gamma = params.gammas[layer];
    for (Eigen::Index k = 0; k < psi.size(); ++k)
      psi(k) *= std::polar(1.0, -gamma * energies(k));
    apply_mixer(psi, qubits, params.betas[layer]);
  }
  return psi;
}

StateVector apply_ansatz(const Ising& ising, const QaoaParams& params) {
  check_qubits(ising.size());
  params.validate();
  return apply_ansatz(energy_table(ising), params);
}

double expectation(const Eigen::VectorXd& energies, const StateVector& psi) {
  if (energies.size() != psi.size()) throw std::invalid_argument("expectation: dimension mismatch");
  return psi.cwiseAbs2().dot(energies);
}

double expectation(const Ising& ising, const StateVector& psi) {
  if ((Eigen::Index{1} << ising.size()) != psi.size())
    throw std::invalid_argument("expectation: dimension mismatch");
  return expectation(energy_table(ising), psi);
}

LayerOptimum optimize_layer(const Eigen::VectorXd& energies, const QaoaParams& init,
                            const OptimizerConfig& cfg) {
  init.validate();
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("optimizer tolerance must be positive");
  auto objective = [&](const Eigen::VectorXd& v) {
    return expectation(energies, apply_ansatz(energies, QaoaParams::unpack(v)));
  };
  auto r = minimize_simplex(objective, init.packed(), cfg);
  return {QaoaParams::unpack(r.x), r.value, r.evaluations, r.converged};
}

LayerOptimum optimize_layer(const Ising& ising, const QaoaParams& init,
                            const OptimizerConfig& cfg) {
  return optimize_layer(energy_table(ising), init, cfg);
}

SampleSet sample_state(const Qubo& q, const StateVector& psi, int reads, std::uint64_t seed) {
  if (reads < 1) throw std::invalid_argument("sample_state: reads must be >= 1");
  const int qubits = qubit_count(psi.size());
  if (qubits != q.size()) throw std::invalid_argument("sample_state: dimension mismatch");

  std::vector<double> cdf(psi.size());
  double total = 0.0;
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    total += std::norm(psi(k));
    cdf[k] = total;
  }
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, total);
  std::vector<Bits> draws;
  draws.reserve(reads);
  for (int r = 0; r < reads; ++r) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), unit(rng));
    auto k = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), psi.size() - 1));
    Bits bits(qubits);
    for (int i = 0; i < qubits; ++i) bits[i] = (k >> i) & 1U;
    draws.push_back(std::move(bits));
  }
  return make_sample_set(q, draws, "qaoa", seed);
}

std::vector<LayerResult> run_schedule(const Qubo& q, const ScheduleConfig& cfg,
                                      const SampleScore& score) {
  if (cfg.max_layers < 1) throw std::invalid_argument("run_schedule: max_layers must be >= 1");
  if (cfg.n_inits < 1) throw std::invalid_argument("run_schedule: n_inits must be >= 1");
  check_qubits(q.size());
  const Eigen::VectorXd energies = energy_table(to_ising(q));

  auto rate = [&](const SampleSet& s) {
    if (score) return score(s);
    double mean = 0.0;
    for (const auto& e : s.entries) mean += e.energy * static_cast<double>(e.count);
    return -mean / static_cast<double>(s.total_reads);
  };

  Rng rng(derive_seed(cfg.seed, {0}));
  std::uniform_real_distribution<double> gamma_dist(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> beta_dist(0.0, std::numbers::pi);

  std::vector<LayerResult> out;
  double best_score = 0.0;
  for (int k = 0; k < cfg.n_inits; ++k) {
    QaoaParams init{{gamma_dist(rng)}, {beta_dist(rng)}};
    auto opt = optimize_layer(energies, init, cfg.optimizer);
    auto samples = sample_state(q, apply_ansatz(energies, opt.params), cfg.reads,
                                derive_seed(cfg.seed, {1, static_cast<std::uint64_t>(k)}));
    const double s = rate(samples);
    if (out.empty() || s > best_score ||
        (s == best_score && opt.value < out.front().expectation)) {
      out.assign(1, {1, opt.params, opt.value, std::move(samples)});
      best_score = s;
    }
  }

  for (int layer = 2; layer <= cfg.max_layers; ++layer) {
    QaoaParams init = out.back().params;
    init.gammas.push_back(0.0);
    init.betas.push_back(0.0);
    auto opt = optimize_layer(energies, init, cfg.optimizer);
    auto samples = sample_state(q, apply_ansatz(energies, opt.params), cfg.reads,
                                derive_seed(cfg.seed, {2, static_cast<std::uint64_t>(layer)}));
    out.push_back({layer, opt.params, opt.value, std::move(samples)});
  }
  return out;
}

nlohmann::json to_json(const LayerResult& layer) {
  auto doc = to_json(layer.samples);
  doc["layer"] = layer.layer;
  doc["gammas"] = layer.params.gammas;
  doc["betas"] = layer.params.betas;
  doc["expectation"] = layer.expectation;
  return doc;
}

}  // namespace smpp
