#include <gtest/gtest.h>

#include "oracles.hpp"
#include "smpp/classical.hpp"

using namespace smpp;

namespace {

Request req(int id, double w, std::vector<int> cams, std::map<int, std::int64_t> caps = {}) {
  Request r;
  r.id = id;
  r.weight = w;
  r.kind = cams == std::vector<int>{4} ? RequestKind::Stereo : RequestKind::Mono;
  r.allowed_cameras = std::move(cams);
  r.capacity_by_camera = std::move(caps);
  return r;
}

}  // namespace

TEST(Objective, Basics) {
  Instance inst;
  inst.requests = {req(1, 2, {1, 2}), req(2, 3, {4})};
  EXPECT_EQ(objective(inst, Assignment{}), 0.0);
  EXPECT_EQ(objective(inst, Assignment::from_choices({{1, 2}, {2, 4}})), 5.0);
}

TEST(Objective, CameraIndependentProperty) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = oracle::random_small_instance(seed, 6);
    std::map<int, int> first, last;
    for (const auto& r : inst.requests) {
      first[r.id] = r.allowed_cameras.front();
      last[r.id] = r.allowed_cameras.back();
    }
    EXPECT_EQ(objective(inst, Assignment::from_choices(first)),
              objective(inst, Assignment::from_choices(last)));
  }
}

TEST(Feasibility, EmptyIsFeasible) {
  const auto inst = oracle::random_small_instance(5, 6);
  const auto report = check_feasible(inst, Assignment{});
  EXPECT_TRUE(report.feasible);
  EXPECT_TRUE(report.violations.empty());
}

TEST(Feasibility, PairViolation) {
  Instance inst;
  inst.requests = {req(1, 1, {1}), req(2, 1, {2, 3})};
  inst.binary_forbidden = {{VarRef{1, 1}, VarRef{2, 3}}};
  const auto report = check_feasible(inst, Assignment::from_choices({{1, 1}, {2, 3}}));
  EXPECT_FALSE(report.feasible);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, ConstraintKind::Pair);
  EXPECT_EQ(report.violations[0].vars, (std::vector<VarRef>{{1, 1}, {2, 3}}));
  EXPECT_TRUE(check_feasible(inst, Assignment::from_choices({{1, 1}, {2, 2}})).feasible);
}

TEST(Feasibility, OnceAndTernary) {
  Instance inst;
  inst.requests = {req(1, 1, {1, 2}), req(2, 1, {1}), req(3, 1, {4})};
  inst.ternary_forbidden = {{VarRef{1, 2}, VarRef{2, 1}, VarRef{3, 4}}};
  Assignment twice;
  twice.take(1, 1);
  twice.take(1, 2);
  auto r1 = check_feasible(inst, twice);
  ASSERT_EQ(r1.violations.size(), 1u);
  EXPECT_EQ(r1.violations[0].kind, ConstraintKind::Once);

  auto r2 = check_feasible(inst, Assignment::from_choices({{1, 2}, {2, 1}, {3, 4}}));
  ASSERT_EQ(r2.violations.size(), 1u);
  EXPECT_EQ(r2.violations[0].kind, ConstraintKind::Ternary);
  EXPECT_TRUE(check_feasible(inst, Assignment::from_choices({{1, 1}, {2, 1}, {3, 4}})).feasible);
}

TEST(Feasibility, CapacityOverflowBySlackOne) {
  Instance inst;
  inst.requests = {req(1, 1, {1, 2}, {{1, 2}, {2, 3}}), req(2, 1, {3}, {{3, 2}}),
                   req(3, 1, {4}, {{4, 1}})};
  inst.disk_capacity = 4;
  const VariableIndex index(inst);
  int found = 0;
  for (std::uint64_t mask = 0; mask < (1u << index.size()); ++mask) {
    const auto bits = oracle::mask_bits(mask, index.size());
    std::int64_t load = 0;
    int per_request[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < index.size(); ++i)
      if (bits[i]) {
        load += inst.request(index[i].request_id).capacity(index[i].camera);
        ++per_request[index[i].request_id];
      }
    if (load != 5 || per_request[1] > 1) continue;
    const auto report = check_feasible(inst, Assignment::from_bits(index, bits));
    ASSERT_EQ(report.violations.size(), 1u);
    EXPECT_EQ(report.violations[0].kind, ConstraintKind::Capacity);
    EXPECT_EQ(report.violations[0].slack_amount, 1);
    ++found;
  }
  EXPECT_GT(found, 0);
}

TEST(Feasibility, AgreesWithDirectCheckProperty) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto inst = oracle::random_small_instance(seed, 4);
    const VariableIndex index(inst);
    if (index.size() > 10) continue;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << index.size()); ++mask) {
      const auto bits = oracle::mask_bits(mask, index.size());
      ASSERT_EQ(check_feasible(inst, Assignment::from_bits(index, bits)).feasible,
                oracle::feasible_direct(inst, bits));
    }
  }
}

TEST(SolveExact, SingleRequest) {
  Instance inst;
  inst.requests = {req(1, 7, {2})};
  const auto r = solve_exact(inst);
  EXPECT_EQ(r.best_value, 7.0);
  EXPECT_TRUE(r.proven_optimal);
  EXPECT_EQ(r.best_assignment.camera_of(1), 2);
}

TEST(SolveExact, TripleAllowsTwoOfThree) {
  Instance inst;
  inst.requests = {req(1, 1, {1}), req(2, 1, {2}), req(3, 1, {3})};
  inst.ternary_forbidden = {{VarRef{1, 1}, VarRef{2, 2}, VarRef{3, 3}}};
  const auto r = solve_exact(inst);
  EXPECT_EQ(r.best_value, 2.0);
  EXPECT_TRUE(check_feasible(inst, r.best_assignment).feasible);
}

TEST(SolveExact, MatchesBruteForceProperty) {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 150; ++seed) {
    const auto inst = oracle::random_small_instance(seed, 7);
    if (variable_count(inst) > 12) continue;
    ++checked;
    const auto r = solve_exact(inst);
    ASSERT_TRUE(r.proven_optimal);
    ASSERT_EQ(r.best_value, oracle::brute_force_fmax(inst)) << "seed " << seed;
    ASSERT_TRUE(check_feasible(inst, r.best_assignment).feasible);
    ASSERT_EQ(objective(inst, r.best_assignment), r.best_value);
  }
}

TEST(SolveExact, BudgetExhaustionIsReported) {
  SyntheticSpec spec;
  spec.requests = 30;
  spec.binary_constraints = 5;
  const auto inst = random_instance(spec, 9);
  const auto r = solve_exact(inst, 10);
  EXPECT_FALSE(r.proven_optimal);
  EXPECT_LE(r.nodes_explored, 10);
  EXPECT_TRUE(check_feasible(inst, r.best_assignment).feasible);
  EXPECT_TRUE(solve_exact(inst).proven_optimal);
}
