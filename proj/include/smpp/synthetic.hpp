#pragma once

#include <cstdint>

#include "smpp/instance.hpp"

namespace smpp {

/// Parameters for drawing a random mission-planning instance. Used as a
/// stand-in source for the reductor and as a generator for property tests.
struct SyntheticSpec {
  int requests = 8;
  double stereo_fraction = 0.25;
  int binary_constraints = 6;
  int ternary_constraints = 2;
  bool with_capacity = false;
  int max_weight = 5;          // integer weights in [1, max_weight]
  int max_item_capacity = 4;   // per-camera capacities in [0, max_item_capacity]
  double zero_capacity_fraction = 0.3;
  int max_cameras_per_mono = 3;
};

/// Deterministic in (spec, seed). Capacity instances get disk_capacity via
/// derive_capacity.
Instance random_instance(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace smpp
