#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "smpp/qubo.hpp"

namespace smpp {

struct Sample {
  Bits bits;
  double energy = 0.0;
  std::int64_t count = 0;
};

/// Entries are unique by bits and sorted lexicographically on them.
struct SampleSet {
  std::vector<Sample> entries;
  std::int64_t total_reads = 0;
  std::string sampler_tag;
  std::uint64_t seed = 0;

  /// Lowest-energy entry; throws on an empty set.
  const Sample& best() const;
};

/// Merges raw reads (order-independent) and evaluates each distinct state.
SampleSet make_sample_set(const Qubo& q, const std::vector<Bits>& reads, std::string tag,
                          std::uint64_t seed);

struct AnnealSchedule {
  int sweeps = 1000;
  double beta_start = 0.1;
  double beta_end = 10.0;
  int restarts_per_read = 1;

  void validate() const;
};

/// Independent single-flip Metropolis anneals, one per read, with a geometric
/// inverse-temperature ramp. Read k uses its own stream derived from (seed, k).
SampleSet sample_sa(const Qubo& q, int reads, const AnnealSchedule& sched, std::uint64_t seed);

struct ExhaustiveResult {
  Bits bits;
  double energy = 0.0;
};

inline constexpr std::size_t kMaxExhaustiveVars = 24;

/// Global minimizer by full enumeration; ties go to the lexicographically
/// smallest bit vector (bit 0 first).
ExhaustiveResult solve_exhaustive(const Qubo& q);

std::string bits_to_string(const Bits& bits);
Bits bits_from_string(const std::string& s);

nlohmann::json to_json(const SampleSet& samples);

}  // namespace smpp
