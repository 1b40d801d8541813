#include "smpp/classical.hpp"

#include <algorithm>
#include <map>

namespace smpp {

double objective(const Instance& inst, const Assignment& a) {
  double value = 0.0;
  for (const auto& v : a.taken()) value += inst.request(v.request_id).weight;
  return value;
}

FeasibilityReport check_feasible(const Instance& inst, const Assignment& a) {
  FeasibilityReport report;
  const VariableIndex index(inst);
  const Bits bits = a.flatten(index);
  auto taken = [&](const VarRef& v) { return bits[index.at(v)] != 0; };

  // Once: grouped over the flattened vector.
  std::size_t i = 0;
  while (i < index.size()) {
    std::size_t j = i;
    std::vector<VarRef> on;
    while (j < index.size() && index[j].request_id == index[i].request_id) {
      if (bits[j]) on.push_back(index[j]);
      ++j;
    }
    if (on.size() > 1) report.violations.push_back({ConstraintKind::Once, on, 0});
    i = j;
  }

  for (const auto& p : inst.binary_forbidden)
    if (taken(p[0]) && taken(p[1]))
      report.violations.push_back({ConstraintKind::Pair, {p[0], p[1]}, 0});

  for (const auto& t : inst.ternary_forbidden)
    if (taken(t[0]) && taken(t[1]) && taken(t[2]))
      report.violations.push_back({ConstraintKind::Ternary, {t[0], t[1], t[2]}, 0});

  if (inst.disk_capacity) {
    std::int64_t load = 0;
    std::vector<VarRef> users;
    for (const auto& v : a.taken()) {
      auto c = inst.request(v.request_id).capacity(v.camera);
      if (c != 0) users.push_back(v);
      load += c;
    }
    if (load > *inst.disk_capacity)
      report.violations.push_back({ConstraintKind::Capacity, users, load - *inst.disk_capacity});
  }

  report.feasible = report.violations.empty();
  return report;
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, std::int64_t budget)
      : inst_(inst), index_(inst), budget_(budget), taken_(index_.size(), 0) {
    const std::size_t n_req = inst.requests.size();
    first_var_.resize(n_req + 1, 0);
    remaining_.assign(n_req + 1, 0.0);
    for (std::size_t k = 0; k < n_req; ++k)
      first_var_[k + 1] = first_var_[k] + inst.requests[k].allowed_cameras.size();
    for (std::size_t k = n_req; k-- > 0;)
      remaining_[k] = remaining_[k + 1] + inst.requests[k].weight;

    pair_partners_.resize(index_.size());
    for (const auto& p : inst.binary_forbidden) {
      auto a = index_.at(p[0]), b = index_.at(p[1]);
      pair_partners_[a].push_back(b);
      pair_partners_[b].push_back(a);
    }
    triple_partners_.resize(index_.size());
    for (const auto& t : inst.ternary_forbidden) {
      std::array<std::size_t, 3> ids{index_.at(t[0]), index_.at(t[1]), index_.at(t[2])};
      for (int k = 0; k < 3; ++k)
        triple_partners_[ids[k]].push_back({ids[(k + 1) % 3], ids[(k + 2) % 3]});
    }
    cost_.resize(index_.size(), 0);
    if (inst.disk_capacity)
      for (std::size_t v = 0; v < index_.size(); ++v)
        cost_[v] = inst.request(index_[v].request_id).capacity(index_[v].camera);
  }

  ExactResult run() {
    best_bits_ = taken_;
    search(0, 0.0, 0);
    ExactResult result;
    result.best_value = best_value_;
    result.best_assignment = Assignment::from_bits(index_, best_bits_);
    result.nodes_explored = nodes_;
    result.proven_optimal = !exhausted_;
    return result;
  }

 private:
  bool admissible(std::size_t v, std::int64_t load) const {
    for (auto other : pair_partners_[v])
      if (taken_[other]) return false;
    for (auto [a, b] : triple_partners_[v])
      if (taken_[a] && taken_[b]) return false;
    if (inst_.disk_capacity && load + cost_[v] > *inst_.disk_capacity) return false;
    return true;
  }

  void search(std::size_t k, double value, std::int64_t load) {
    if (exhausted_) return;
    if (nodes_ >= budget_) {
      exhausted_ = true;
      return;
    }
    ++nodes_;
    if (value > best_value_) {
      best_value_ = value;
      best_bits_ = taken_;
    }
    if (k == inst_.requests.size()) return;
    if (value + remaining_[k] <= best_value_) return;

    const double w = inst_.requests[k].weight;
    for (std::size_t v = first_var_[k]; v < first_var_[k + 1]; ++v) {
      if (!admissible(v, load)) continue;
      taken_[v] = 1;
      search(k + 1, value + w, load + cost_[v]);
      taken_[v] = 0;
      if (exhausted_) return;
    }
    search(k + 1, value, load);
  }

  const Instance& inst_;
  VariableIndex index_;
  std::int64_t budget_;
  std::vector<std::size_t> first_var_;
  std::vector<double> remaining_;
  std::vector<std::vector<std::size_t>> pair_partners_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> triple_partners_;
  std::vector<std::int64_t> cost_;
  Bits taken_;
  Bits best_bits_;
  double best_value_ = 0.0;
  std::int64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace

ExactResult solve_exact(const Instance& inst, std::int64_t node_budget) {
  return BranchAndBound(inst, node_budget).run();
}

}  // namespace smpp
