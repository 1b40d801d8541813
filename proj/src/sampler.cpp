#include "smpp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "smpp/rng.hpp"

namespace smpp {

namespace {

/// Adjacency view of a QUBO for O(degree) flip deltas.
class LocalFields {
 public:
  explicit LocalFields(const Qubo& q) : diag_(q.size(), 0.0), adj_(q.size()) {
    for (Eigen::Index col = 0; col < q.q.outerSize(); ++col)
      for (Qubo::SparseMatrix::InnerIterator it(q.q, col); it; ++it) {
        if (it.row() == col)
          diag_[col] = it.value();
        else
          adj_[col].emplace_back(it.row(), 2.0 * it.value());
      }
    field_.assign(q.size(), 0.0);
  }

  void reset(const Bits& x) {
    std::fill(field_.begin(), field_.end(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i])
        for (auto [j, c] : adj_[i]) field_[j] += c;
  }

  /// Energy change from flipping bit i of x.
  double delta(const Bits& x, std::size_t i) const {
    const double up = diag_[i] + field_[i];
    return x[i] ? -up : up;
  }

  void flip(Bits& x, std::size_t i) {
    const double sign = x[i] ? -1.0 : 1.0;
    x[i] ^= 1U;
    for (auto [j, c] : adj_[i]) field_[j] += sign * c;
  }

  double scale() const {
    double s = 1.0;
    for (std::size_t i = 0; i < diag_.size(); ++i) {
      s += std::abs(diag_[i]);
      for (auto [j, c] : adj_[i]) s += 0.5 * std::abs(c);
    }
    return s;
  }

 private:
  std::vector<double> diag_;
  std::vector<std::vector<std::pair<Eigen::Index, double>>> adj_;
  std::vector<double> field_;
};

}  // namespace

const Sample& SampleSet::best() const {
  if (entries.empty()) throw std::logic_error("empty sample set");
  return *std::min_element(entries.begin(), entries.end(),
                           [](const Sample& a, const Sample& b) { return a.energy < b.energy; });
}

SampleSet make_sample_set(const Qubo& q, const std::vector<Bits>& reads, std::string tag,
                          std::uint64_t seed) {
  std::map<Bits, std::int64_t> counts;
  for (const auto& r : reads) ++counts[r];
  SampleSet out;
  out.sampler_tag = std::move(tag);
  out.seed = seed;
  out.total_reads = static_cast<std::int64_t>(reads.size());
  for (const auto& [bits, count] : counts) out.entries.push_back({bits, qubo_energy(q, bits), count});
  return out;
}

void AnnealSchedule::validate() const {
  if (sweeps < 1) throw std::invalid_argument("anneal schedule: sweeps must be >= 1");
  if (!(beta_start > 0.0) || !(beta_end > beta_start))
    throw std::invalid_argument("anneal schedule: need beta_end > beta_start > 0");
  if (restarts_per_read < 1) throw std::invalid_argument("anneal schedule: restarts must be >= 1");
}

SampleSet sample_sa(const Qubo& q, int reads, const AnnealSchedule& sched, std::uint64_t seed) {
  if (reads < 1) throw std::invalid_argument("sample_sa: reads must be >= 1");
  sched.validate();
  const auto n = static_cast<std::size_t>(q.size());

  std::vector<double> betas(sched.sweeps);
  for (int k = 0; k < sched.sweeps; ++k) {
    const double t = sched.sweeps == 1 ? 1.0 : static_cast<double>(k) / (sched.sweeps - 1);
    betas[k] = sched.beta_start * std::pow(sched.beta_end / sched.beta_start, t);
  }

  LocalFields fields(q);
  std::vector<Bits> finals;
  finals.reserve(reads);
  for (int read = 0; read < reads; ++read) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(read)}));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    Bits best;
    double best_energy = 0.0;
    for (int restart = 0; restart < sched.restarts_per_read; ++restart) {
      Bits x(n);
      for (auto& b : x) b = coin(rng) ? 1 : 0;
      fields.reset(x);
      for (double beta : betas)
        for (std::size_t i = 0; i < n; ++i) {
          const double d = fields.delta(x, i);
          if (d <= 0.0 || unit(rng) < std::exp(-beta * d)) fields.flip(x, i);
        }
      const double e = qubo_energy(q, x);
      if (restart == 0 || e < best_energy) {
        best = std::move(x);
        best_energy = e;
      }
    }
    finals.push_back(std::move(best));
  }
  return make_sample_set(q, finals, "sa", seed);
}

ExhaustiveResult solve_exhaustive(const Qubo& q) {
  const auto n = static_cast<std::size_t>(q.size());
  if (n > kMaxExhaustiveVars)
    throw std::invalid_argument("solve_exhaustive: " + std::to_string(n) +
                                " variables exceeds the limit of " +
                                std::to_string(kMaxExhaustiveVars));
  LocalFields fields(q);
  Bits x(n, 0);
  fields.reset(x);
  ExhaustiveResult best{x, qubo_energy(q, x)};

  // Gray-code walk with incremental energies; near-ties are settled on the
  // exact energy so accumulated rounding never decides the winner.
  const double tol = 1e-9 * fields.scale();
  double running = best.energy;
  double best_running = running;
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
    const auto i = static_cast<std::size_t>(std::countr_zero(k));
    running += fields.delta(x, i);
    fields.flip(x, i);
    if (running > best_running + tol) continue;
    const double exact = qubo_energy(q, x);
    if (running < best_running - tol || exact < best.energy ||
        (exact == best.energy && x < best.bits)) {
      best.bits = x;
      best.energy = exact;
      best_running = running;
    }
  }
  return best;
}

std::string bits_to_string(const Bits& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) s[i] = '1';
  return s;
}

Bits bits_from_string(const std::string& s) {
  Bits bits(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("bit string must be 0/1");
    bits[i] = s[i] == '1';
  }
  return bits;
}

nlohmann::json to_json(const SampleSet& samples) {
  nlohmann::json doc;
  doc["sampler"] = samples.sampler_tag;
  doc["seed"] = samples.seed;
  doc["reads"] = samples.total_reads;
  auto entries = nlohmann::json::array();
  for (const auto& e : samples.entries)
    entries.push_back({{"bits", bits_to_string(e.bits)}, {"energy", e.energy}, {"count", e.count}});
  doc["entries"] = entries;
  return doc;
}

}  // namespace smpp
