#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "smpp/qubo.hpp"
#include "smpp/sampler.hpp"
#include "smpp/simplex.hpp"

namespace smpp {

/// Amplitudes over 2^N basis states; bit i of the index is variable i.
using StateVector = Eigen::VectorXcd;

inline constexpr int kMaxQaoaQubits = 26;

struct QaoaParams {
  std::vector<double> gammas;
  std::vector<double> betas;

  int layers() const { return static_cast<int>(gammas.size()); }
  void validate() const;

  Eigen::VectorXd packed() const;
  static QaoaParams unpack(const Eigen::VectorXd& v);
};

using OptimizerConfig = SimplexOptions;

/// Diagonal of H_C (including the offset) for every basis state.
Eigen::VectorXd energy_table(const Ising& ising);

/// |+...+>, then for each layer exp(-i gamma H_C) followed by
/// exp(-i beta X) on every qubit.
StateVector apply_ansatz(const Ising& ising, const QaoaParams& params);
StateVector apply_ansatz(const Eigen::VectorXd& energies, const QaoaParams& params);

double expectation(const Ising& ising, const StateVector& psi);
double expectation(const Eigen::VectorXd& energies, const StateVector& psi);

struct LayerOptimum {
  QaoaParams params;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Local derivative-free minimization of the expectation over all 2l angles.
/// Angles are searched unconstrained.
LayerOptimum optimize_layer(const Ising& ising, const QaoaParams& init, const OptimizerConfig& cfg);
LayerOptimum optimize_layer(const Eigen::VectorXd& energies, const QaoaParams& init,
                            const OptimizerConfig& cfg);

/// `reads` draws from |psi|^2 by inverse CDF; energies come from the QUBO.
SampleSet sample_state(const Qubo& q, const StateVector& psi, int reads, std::uint64_t seed);

struct LayerResult {
  int layer = 0;
  QaoaParams params;
  double expectation = 0.0;
  SampleSet samples;
};

struct ScheduleConfig {
  int max_layers = 10;
  int n_inits = 5;
  int reads = 2000;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
};

/// Higher is better. Used to pick the winning layer-1 start.
using SampleScore = std::function<double(const SampleSet&)>;

/// Parameter-fixing schedule. Layer 1 optimizes `n_inits` uniform random
/// starts in [0, 2pi) x [0, pi) and keeps the one whose samples score best
/// (ties: lower expectation, then earlier start). Layer l+1 starts from the
/// layer-l optimum with gamma = beta = 0 appended and re-optimizes all angles.
/// Without a scorer, samples are scored by negative mean energy.
std::vector<LayerResult> run_schedule(const Qubo& q, const ScheduleConfig& cfg,
                                      const SampleScore& score = {});

nlohmann::json to_json(const LayerResult& layer);

}  // namespace smpp
