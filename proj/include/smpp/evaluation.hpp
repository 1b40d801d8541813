#pragma once

#include <vector>

#include "smpp/instance.hpp"
#include "smpp/sampler.hpp"

namespace smpp {

struct RunMetrics {
  double expected_ar = 0.0;
  double best_ar = 0.0;
  double feasible_fraction = 0.0;
  std::int64_t reads = 0;
};

struct AggregateMetrics {
  double mean_expected_ar = 0.0;
  double mean_best_ar = 0.0;
  double ci95_expected = 0.0;  // half-widths
  double ci95_best = 0.0;
  int runs = 0;
};

/// Truncates `bits` to its first n components, decodes them against the
/// instance's variable order and returns F(x)/f_max if feasible, else 0.
double approximation_ratio(const Instance& inst, double f_max, const Bits& bits, std::size_t n);

RunMetrics run_metrics(const Instance& inst, double f_max, const SampleSet& samples,
                       std::size_t n);

/// Two-sided 97.5% Student-t quantile for `dof` degrees of freedom.
double t_critical_975(int dof);

/// Sample means with t-based 95% confidence half-widths. Needs >= 2 runs.
AggregateMetrics aggregate(const std::vector<RunMetrics>& runs);

}  // namespace smpp
