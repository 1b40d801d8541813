#pragma once

#include <cstdint>
#include <vector>

#include "smpp/instance.hpp"

namespace smpp {

enum class ConstraintKind { Once, Pair, Ternary, Capacity };

struct Violation {
  ConstraintKind kind;
  std::vector<VarRef> vars;
  std::int64_t slack_amount = 0;  // load - C for Capacity, 0 otherwise
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

struct ExactResult {
  double best_value = 0.0;
  Assignment best_assignment;
  std::int64_t nodes_explored = 0;
  bool proven_optimal = false;
};

inline constexpr std::int64_t kDefaultNodeBudget = 50'000'000;

/// Sum of w_i over every taken (request, camera) pair.
double objective(const Instance& inst, const Assignment& a);

FeasibilityReport check_feasible(const Instance& inst, const Assignment& a);

/// Depth-first branch and bound over requests in instance order. Each request
/// branches on its allowed cameras (ascending) and then on skipping it; the
/// bound is the current value plus the weights of all undecided requests.
ExactResult solve_exact(const Instance& inst, std::int64_t node_budget = kDefaultNodeBudget);

}  // namespace smpp
