#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "smpp/qubo.hpp"

namespace smpp {

/// Number of binary slack digits D with 2^D - 1 >= capacity.
int capacity_slack_bits(std::int64_t capacity);

/// Default penalty magnitude: sum of all request weights plus one.
double default_penalty(const Instance& inst);

/// Builds the minimization QUBO: -w on each decision variable plus M times
///  - pairwise products among a request's cameras,
///  - one product per forbidden pair,
///  - M x_p s + M (x_q x_r - 2 x_q s - 2 x_r s + 3 s) per forbidden triple,
///    where (q, r) are the two largest flattened indices and s is shared by
///    every triple substituting the same pair,
///  - M (sum c_p x_p + sum 2^d s_d - C)^2 when a disk capacity is present.
/// Throws std::invalid_argument for a non-positive penalty override.
Qubo encode(const Instance& inst, std::optional<double> penalty = std::nullopt);

/// Reads the first n bits through the registry. Multiple cameras set on one
/// request are all kept.
Assignment decode(const Qubo& q, const Bits& x);

/// Extends decision bits with the penalty-minimizing slack values: s = x_q x_r
/// for each ternary pair and the binary digits of C - load (clamped to the
/// representable range) for the capacity slacks.
Bits complete_slacks(const Instance& inst, const Qubo& q, const Bits& decision_bits);

/// Minimum over all slack completions of the penalty part of the energy
/// (energy minus the objective contribution). Refuses s > 24.
double min_slack_penalty(const Qubo& q, const Bits& decision_bits);

/// Upper-triangular COO export; off-diagonal values are full interaction
/// coefficients so that E(x) = offset + sum v x_i x_j.
std::string qubo_to_json(const Qubo& q);

}  // namespace smpp
