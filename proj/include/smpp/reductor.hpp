#pragma once

#include <cstdint>

#include "smpp/instance.hpp"

namespace smpp {

struct ReductionSpec {
  int target_requests = 1;
  bool with_capacity = false;
  std::uint64_t seed = 0;
};

/// Shrinks `src` to `spec.target_requests` requests by picking random
/// constraints and keeping the requests they involve. Constraints are kept
/// exactly when all their variables survive. If the constraints run out before
/// the target is reached, remaining requests are drawn uniformly and the
/// instance name carries a "-uniform" flag.
Instance reduce(const Instance& src, const ReductionSpec& spec);

/// T = sum over requests of the cheapest allowed-camera capacity.
std::int64_t capacity_total(const Instance& inst);

/// Sets disk_capacity to ceil(T / 2). Requires at least one request with
/// per-camera capacities. A result with disk_capacity == 0 means every
/// capacity was zero.
Instance derive_capacity(const Instance& inst);

Instance strip_capacity(const Instance& inst);

}  // namespace smpp
