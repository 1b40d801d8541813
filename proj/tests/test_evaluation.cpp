#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "smpp/encoder.hpp"
#include "smpp/evaluation.hpp"

using namespace smpp;

namespace {

// Requests 1 (w=2) and 2 (w=3), single camera each, forbidden together.
Instance pair_instance() {
  Instance inst;
  inst.name = "pair";
  Request a;
  a.id = 1;
  a.weight = 2;
  a.allowed_cameras = {1};
  Request b = a;
  b.id = 2;
  b.weight = 3;
  b.allowed_cameras = {2};
  inst.requests = {a, b};
  inst.binary_forbidden = {{VarRef{1, 1}, VarRef{2, 2}}};
  return inst;
}

SampleSet samples(std::vector<std::pair<Bits, std::int64_t>> counts) {
  SampleSet s;
  for (auto& [bits, c] : counts) {
    s.entries.push_back({bits, 0.0, c});
    s.total_reads += c;
  }
  std::sort(s.entries.begin(), s.entries.end(),
            [](const Sample& x, const Sample& y) { return x.bits < y.bits; });
  return s;
}

}  // namespace

TEST(ApproximationRatio, Examples) {
  const auto inst = pair_instance();
  EXPECT_EQ(approximation_ratio(inst, 3.0, {0, 1}, 2), 1.0);
  EXPECT_DOUBLE_EQ(approximation_ratio(inst, 3.0, {1, 0}, 2), 2.0 / 3.0);
  EXPECT_EQ(approximation_ratio(inst, 3.0, {1, 1}, 2), 0.0);
  EXPECT_EQ(approximation_ratio(inst, 3.0, {0, 0}, 2), 0.0);
  // trailing slack bits are ignored
  EXPECT_EQ(approximation_ratio(inst, 3.0, {0, 1, 1, 0, 1}, 2), 1.0);
  EXPECT_THROW(approximation_ratio(inst, 0.0, {0, 1}, 2), std::invalid_argument);
  EXPECT_THROW(approximation_ratio(inst, 3.0, {0, 1}, 1), std::invalid_argument);
}

TEST(RunMetrics, HalfOptimalHalfInfeasible) {
  const auto inst = pair_instance();
  const auto m = run_metrics(inst, 3.0, samples({{{0, 1}, 1000}, {{1, 1}, 1000}}), 2);
  EXPECT_EQ(m.expected_ar, 0.5);
  EXPECT_EQ(m.best_ar, 1.0);
  EXPECT_EQ(m.feasible_fraction, 0.5);
  EXPECT_EQ(m.reads, 2000);
}

TEST(RunMetrics, SingleInfeasibleRead) {
  const auto m = run_metrics(pair_instance(), 3.0, samples({{{1, 1}, 1}}), 2);
  EXPECT_EQ(m.expected_ar, 0.0);
  EXPECT_EQ(m.best_ar, 0.0);
  EXPECT_THROW(run_metrics(pair_instance(), 3.0, SampleSet{}, 2), std::invalid_argument);
}

TEST(RunMetrics, BestDominatesExpectedProperty) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto inst = oracle::random_small_instance(seed, 5);
    const double f_max = oracle::brute_force_fmax(inst);
    if (f_max <= 0) continue;
    const auto q = encode(inst);
    std::mt19937_64 rng(seed);
    std::vector<std::pair<Bits, std::int64_t>> raw;
    std::set<Bits> seen;
    for (int k = 0; k < 10; ++k) {
      Bits b(q.registry.size());
      for (auto& v : b) v = rng() % 2;
      if (seen.insert(b).second) raw.push_back({b, 1 + static_cast<std::int64_t>(rng() % 5)});
    }
    const auto m = run_metrics(inst, f_max, samples(raw), q.registry.n());
    EXPECT_GE(m.best_ar, m.expected_ar);
    EXPECT_GE(m.expected_ar, 0.0);
    EXPECT_LE(m.best_ar, 1.0);

    // flipping slack bits leaves the metrics unchanged
    auto flipped = raw;
    for (auto& [b, c] : flipped)
      for (std::size_t i = q.registry.n(); i < b.size(); ++i) b[i] ^= 1;
    const auto m2 = run_metrics(inst, f_max, samples(flipped), q.registry.n());
    EXPECT_EQ(m.expected_ar, m2.expected_ar);
    EXPECT_EQ(m.best_ar, m2.best_ar);
  }
}

TEST(Aggregate, TCritical) {
  EXPECT_NEAR(t_critical_975(1), 12.706204736, 1e-8);
  EXPECT_NEAR(t_critical_975(4), 2.776445105, 1e-8);
  EXPECT_NEAR(t_critical_975(30), 2.042272456, 1e-8);
  EXPECT_THROW(t_critical_975(0), std::invalid_argument);
}

TEST(Aggregate, IdenticalRunsHaveZeroWidth) {
  const RunMetrics r{0.4, 0.9, 1.0, 100};
  const auto a = aggregate({r, r, r, r, r});
  EXPECT_DOUBLE_EQ(a.mean_expected_ar, 0.4);
  EXPECT_DOUBLE_EQ(a.mean_best_ar, 0.9);
  EXPECT_EQ(a.ci95_expected, 0.0);
  EXPECT_EQ(a.ci95_best, 0.0);
  EXPECT_EQ(a.runs, 5);
}

TEST(Aggregate, TwoRunsHandComputed) {
  const auto a = aggregate({{0.0, 0.0, 0.0, 1}, {1.0, 1.0, 1.0, 1}});
  EXPECT_EQ(a.mean_expected_ar, 0.5);
  // s = sqrt(0.5), half-width = t_1 * s / sqrt(2) = t_1 / 2
  EXPECT_NEAR(a.ci95_expected, 12.706204736 / 2.0, 1e-8);
  EXPECT_THROW(aggregate({{0.5, 0.5, 1.0, 1}}), std::invalid_argument);
  EXPECT_THROW(aggregate({}), std::invalid_argument);
}

TEST(Aggregate, PermutationInvariantProperty) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<RunMetrics> runs(2 + trial % 6);
    for (auto& r : runs) r = {u(rng), u(rng), 1.0, 10};
    const auto a = aggregate(runs);
    std::shuffle(runs.begin(), runs.end(), rng);
    const auto b = aggregate(runs);
    EXPECT_EQ(a.mean_expected_ar, b.mean_expected_ar);
    EXPECT_EQ(a.ci95_expected, b.ci95_expected);
    EXPECT_EQ(a.mean_best_ar, b.mean_best_ar);
    EXPECT_EQ(a.ci95_best, b.ci95_best);
  }
}
