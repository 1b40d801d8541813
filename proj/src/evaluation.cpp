#include "smpp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "smpp/classical.hpp"

namespace smpp {

namespace {

double ratio(const Instance& inst, const VariableIndex& index, double f_max, const Bits& bits,
             std::size_t n) {
  if (bits.size() < n) throw std::invalid_argument("approximation_ratio: bits shorter than n");
  if (n != index.size())
    throw std::invalid_argument("approximation_ratio: n does not match the instance");
  Bits head(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(n));
  const Assignment a = Assignment::from_bits(index, head);
  if (!check_feasible(inst, a).feasible) return 0.0;
  return objective(inst, a) / f_max;
}

void check_f_max(double f_max) {
  if (!(f_max > 0.0))
    throw std::invalid_argument("approximation ratio undefined for F_max <= 0");
}

}  // namespace

double approximation_ratio(const Instance& inst, double f_max, const Bits& bits, std::size_t n) {
  check_f_max(f_max);
  return ratio(inst, VariableIndex(inst), f_max, bits, n);
}

RunMetrics run_metrics(const Instance& inst, double f_max, const SampleSet& samples,
                       std::size_t n) {
  check_f_max(f_max);
  if (samples.entries.empty() || samples.total_reads <= 0)
    throw std::invalid_argument("run_metrics: empty sample set");
  const VariableIndex index(inst);
  RunMetrics m;
  m.reads = samples.total_reads;
  double weighted = 0.0;
  std::int64_t feasible = 0;
  for (const auto& e : samples.entries) {
    const Bits head(e.bits.begin(), e.bits.begin() + static_cast<std::ptrdiff_t>(n));
    const Assignment a = Assignment::from_bits(index, head);
    const bool ok = check_feasible(inst, a).feasible;
    const double ar = ok ? objective(inst, a) / f_max : 0.0;
    weighted += ar * static_cast<double>(e.count);
    m.best_ar = std::max(m.best_ar, ar);
    if (ok) feasible += e.count;
  }
  m.expected_ar = weighted / static_cast<double>(samples.total_reads);
  m.feasible_fraction = static_cast<double>(feasible) / static_cast<double>(samples.total_reads);
  return m;
}

double t_critical_975(int dof) {
  if (dof < 1) throw std::invalid_argument("t_critical_975: dof must be >= 1");
  boost::math::students_t dist(dof);
  return boost::math::quantile(dist, 0.975);
}

AggregateMetrics aggregate(const std::vector<RunMetrics>& runs) {
  if (runs.size() < 2) throw std::invalid_argument("aggregate: at least two runs required");
  const auto n = static_cast<double>(runs.size());
  // Sorted accumulation keeps the result independent of run order.
  auto mean_sd = [&](auto field) {
    std::vector<double> v;
    for (const auto& r : runs) v.push_back(field(r));
    std::sort(v.begin(), v.end());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(ss / (n - 1.0))};
  };
  const double t = t_critical_975(static_cast<int>(runs.size()) - 1);
  auto [me, se] = mean_sd([](const RunMetrics& r) { return r.expected_ar; });
  auto [mb, sb] = mean_sd([](const RunMetrics& r) { return r.best_ar; });
  AggregateMetrics out;
  out.runs = static_cast<int>(runs.size());
  out.mean_expected_ar = me;
  out.mean_best_ar = mb;
  out.ci95_expected = t * se / std::sqrt(n);
  out.ci95_best = t * sb / std::sqrt(n);
  return out;
}

}  // namespace smpp
