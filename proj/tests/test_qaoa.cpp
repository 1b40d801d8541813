#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "smpp/encoder.hpp"
#include "smpp/qaoa.hpp"

using namespace smpp;

namespace {

constexpr double kPi = std::numbers::pi;

Qubo random_qubo(std::uint64_t seed, std::size_t n, int range = 20) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-range, range);
  QuadraticBuilder<double> b(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (rng() % 2) b.add_quadratic(i, j, coef(rng) / 4.0);
  Qubo q;
  q.q = b.build();
  return q;
}

Qubo single(double d) {
  QuadraticBuilder<double> b(1);
  b.add_linear(0, d);
  Qubo q;
  q.q = b.build();
  return q;
}

// Energies straight from the QUBO, one basis state at a time.
Eigen::VectorXd table_by_enumeration(const Qubo& q) {
  const auto n = q.q.rows();
  Eigen::VectorXd e(Eigen::Index{1} << n);
  for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = qubo_energy(q, oracle::mask_bits(k, n));
  return e;
}

}  // namespace

TEST(Qaoa, EnergyTableMatchesQubo) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto q = random_qubo(seed, 1 + seed % 9);
    EXPECT_TRUE(energy_table(to_ising(q)).isApprox(table_by_enumeration(q), 1e-12));
  }
}

TEST(Qaoa, ZeroAnglesKeepUniformState) {
  const auto q = random_qubo(1, 5);
  const auto psi = apply_ansatz(to_ising(q), {{0.0}, {0.0}});
  for (Eigen::Index k = 0; k < psi.size(); ++k)
    EXPECT_NEAR(std::norm(psi(k)), 1.0 / 32.0, 1e-12);
}

TEST(Qaoa, NormPreservedProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-4.0, 4.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ising = to_ising(random_qubo(trial, 8));
    QaoaParams p;
    for (int l = 0; l < 1 + trial % 4; ++l) {
      p.gammas.push_back(angle(rng));
      p.betas.push_back(angle(rng));
    }
    EXPECT_NEAR(apply_ansatz(ising, p).squaredNorm(), 1.0, 1e-10);
  }
}

TEST(Qaoa, SingleQubitRotations) {
  // |+> is an eigenstate of X, so with a flat energy table nothing moves
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  const auto psi = apply_ansatz(zero, {{0.3}, {kPi / 2}});
  EXPECT_NEAR(std::norm(psi(0)), 0.5, 1e-12);
  EXPECT_NEAR(std::norm(psi(1)), 0.5, 1e-12);

  // phase pi/2 gives (|0> - i|1>)/sqrt2, which exp(-i pi/4 X) sends to -i|1>
  Eigen::VectorXd e(2);
  e << 0.0, 1.0;
  const auto flipped = apply_ansatz(e, {{kPi / 2}, {kPi / 4}});
  EXPECT_NEAR(flipped(1).real(), 0.0, 1e-12);
  EXPECT_NEAR(flipped(1).imag(), -1.0, 1e-12);
  EXPECT_NEAR(std::abs(flipped(0)), 0.0, 1e-12);
}

TEST(Qaoa, PhaseIsPeriodicForIntegerEnergies) {
  Eigen::VectorXd e(8);
  e << 0, 3, -2, 5, 1, 1, -4, 2;
  const auto a = apply_ansatz(e, {{0.7}, {0.4}});
  const auto b = apply_ansatz(e, {{0.7 + 2 * kPi}, {0.4}});
  EXPECT_LT((a - b).norm(), 1e-10);
}

TEST(Qaoa, ExpectationOfUniformIsMeanEnergy) {
  const auto q = random_qubo(8, 6);
  const auto ising = to_ising(q);
  const auto psi = apply_ansatz(ising, {{0.0}, {0.0}});
  EXPECT_NEAR(expectation(ising, psi), table_by_enumeration(q).mean(), 1e-10);
}

TEST(Qaoa, ExpectationOfBasisState) {
  const auto q = random_qubo(9, 4);
  const auto ising = to_ising(q);
  StateVector psi = StateVector::Zero(16);
  psi(11) = std::complex<double>(0.0, 1.0);
  EXPECT_NEAR(expectation(ising, psi), qubo_energy(q, oracle::mask_bits(11, 4)), 1e-12);
}

TEST(Qaoa, ExpectationBoundedBelowByGroundEnergyProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const auto q = random_qubo(trial + 40, 6);
    const auto ising = to_ising(q);
    const double ground = solve_exhaustive(q).energy;
    const QaoaParams p{{angle(rng), angle(rng)}, {angle(rng), angle(rng)}};
    EXPECT_GE(expectation(ising, apply_ansatz(ising, p)), ground - 1e-9);
  }
}

TEST(Qaoa, ParamsValidation) {
  EXPECT_THROW((QaoaParams{{0.1}, {}}).validate(), std::invalid_argument);
  EXPECT_THROW((QaoaParams{{}, {}}).validate(), std::invalid_argument);
  const QaoaParams p{{0.1, 0.2}, {0.3, 0.4}};
  EXPECT_EQ(QaoaParams::unpack(p.packed()).gammas, p.gammas);
  EXPECT_EQ(QaoaParams::unpack(p.packed()).betas, p.betas);
}

TEST(Qaoa, OptimizeSingleQubitReachesGround) {
  const auto ising = to_ising(single(-1.0));
  // grid oracle over one period
  double grid_best = 1.0;
  for (int a = 0; a < 200; ++a)
    for (int b = 0; b < 200; ++b) {
      const QaoaParams p{{2 * kPi * a / 200}, {kPi * b / 200}};
      grid_best = std::min(grid_best, expectation(ising, apply_ansatz(ising, p)));
    }
  EXPECT_LT(grid_best, -0.99);
  const auto opt = optimize_layer(ising, {{1.0}, {0.3}}, {});
  EXPECT_LE(opt.value, -0.99);
  EXPECT_LE(opt.value, grid_best + 1e-3);
  EXPECT_NEAR(expectation(ising, apply_ansatz(ising, opt.params)), opt.value, 1e-12);
}

TEST(Qaoa, OptimizerNeverWorsensStart) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ising = to_ising(random_qubo(seed + 70, 5));
    const QaoaParams start{{0.4, 1.1}, {0.2, 0.7}};
    const double before = expectation(ising, apply_ansatz(ising, start));
    const auto opt = optimize_layer(ising, start, {});
    EXPECT_LE(opt.value, before);
    // restarting from the optimum keeps it
    EXPECT_LE(optimize_layer(ising, opt.params, {}).value, opt.value + 1e-12);
  }
}

TEST(Qaoa, SampledMeanAgreesWithExpectation) {
  const auto q = random_qubo(21, 6);
  const auto ising = to_ising(q);
  const auto psi = apply_ansatz(ising, {{0.6}, {0.35}});
  const double mu = expectation(ising, psi);
  const auto table = energy_table(ising);
  const double var = (psi.cwiseAbs2().array() * (table.array() - mu).square()).sum();
  const int reads = 20000;
  const auto s = sample_state(q, psi, reads, 5);
  double mean = 0.0;
  for (const auto& e : s.entries) mean += e.energy * e.count;
  mean /= reads;
  EXPECT_EQ(s.total_reads, reads);
  EXPECT_LT(std::abs(mean - mu), 4.0 * std::sqrt(var / reads));
}

TEST(Qaoa, SamplingBasisStateIsDeterministic) {
  const auto q = random_qubo(2, 3);
  StateVector psi = StateVector::Zero(8);
  psi(6) = 1.0;
  const auto s = sample_state(q, psi, 50, 0);
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].bits, (Bits{0, 1, 1}));
}

TEST(QaoaSchedule, LayersAndDeterminism) {
  const auto q = encode(oracle::random_small_instance(3, 3, false));
  ASSERT_LE(q.registry.size(), 10u);
  ScheduleConfig cfg;
  cfg.max_layers = 3;
  cfg.n_inits = 2;
  cfg.reads = 200;
  cfg.seed = 17;
  const auto a = run_schedule(q, cfg);
  ASSERT_EQ(a.size(), 3u);
  for (int l = 0; l < 3; ++l) {
    EXPECT_EQ(a[l].layer, l + 1);
    EXPECT_EQ(a[l].params.layers(), l + 1);
    EXPECT_EQ(a[l].samples.total_reads, 200);
  }
  const auto b = run_schedule(q, cfg);
  for (int l = 0; l < 3; ++l) EXPECT_EQ(to_json(a[l]), to_json(b[l]));

  // layer 1 does at least as well as the uniform superposition
  EXPECT_LE(a[0].expectation, table_by_enumeration(q).mean() + 1e-9);
  // each layer starts from the previous optimum, so it cannot get worse
  for (int l = 1; l < 3; ++l) EXPECT_LE(a[l].expectation, a[l - 1].expectation + 1e-9);
}

TEST(QaoaSchedule, RefusesTooManyQubits) {
  Qubo q;
  q.q.resize(kMaxQaoaQubits + 1, kMaxQaoaQubits + 1);
  EXPECT_THROW(run_schedule(q, {}), std::invalid_argument);
}
