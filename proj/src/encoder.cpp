#include "smpp/encoder.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <json.hpp>

namespace smpp {

int capacity_slack_bits(std::int64_t capacity) {
  if (capacity < 0) throw std::invalid_argument("capacity must be non-negative");
  int d = 0;
  while (((std::int64_t{1} << d) - 1) < capacity) ++d;
  return d;
}

double default_penalty(const Instance& inst) {
  double total = 0.0;
  for (const auto& r : inst.requests) total += r.weight;
  return total + 1.0;
}

Qubo encode(const Instance& inst, std::optional<double> penalty) {
  const double m = penalty.value_or(default_penalty(inst));
  if (!(m > 0.0)) throw std::invalid_argument("penalty magnitude must be positive");

  Qubo out;
  out.penalty_m = m;
  const VariableIndex index(inst);
  out.registry.decision_vars = index.vars();
  const auto n = static_cast<Eigen::Index>(index.size());

  // Slack layout first, so the builder knows the final size.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_slack;
  struct Triple {
    std::size_t p, q, r;
  };
  std::vector<Triple> triples;
  for (const auto& t : inst.ternary_forbidden) {
    std::array<std::size_t, 3> ids{index.at(t[0]), index.at(t[1]), index.at(t[2])};
    std::sort(ids.begin(), ids.end());
    triples.push_back({ids[0], ids[1], ids[2]});
    if (pair_slack.emplace(std::pair{ids[1], ids[2]}, out.registry.slack_vars.size()).second)
      out.registry.slack_vars.push_back({SlackOrigin::TernaryPair, ids[1], ids[2], 0});
  }

  std::vector<std::pair<std::size_t, std::int64_t>> loads;  // (var, c_p) with c_p != 0
  int digits = 0;
  std::size_t first_cap_slack = out.registry.slack_vars.size();
  if (inst.disk_capacity) {
    for (std::size_t v = 0; v < index.size(); ++v) {
      auto c = inst.request(index[v].request_id).capacity(index[v].camera);
      if (c != 0) loads.emplace_back(v, c);
    }
    if (loads.empty()) {
      out.notes.push_back("disk capacity present but no request uses storage; "
                          "capacity penalty omitted");
    } else {
      digits = capacity_slack_bits(*inst.disk_capacity);
      for (int d = 0; d < digits; ++d)
        out.registry.slack_vars.push_back({SlackOrigin::CapacityBit, 0, 0, d});
    }
  }

  const auto size = static_cast<Eigen::Index>(out.registry.size());
  QuadraticBuilder<double> b(size);
  out.objective = Eigen::VectorXd::Zero(n);

  for (std::size_t v = 0; v < index.size(); ++v) {
    const double w = inst.request(index[v].request_id).weight;
    out.objective(v) = -w;
    b.add_linear(v, -w);
  }

  // Uniqueness: variables of one request are contiguous.
  for (std::size_t v = 0; v < index.size(); ++v)
    for (std::size_t u = v + 1; u < index.size() && index[u].request_id == index[v].request_id;
         ++u)
      b.add_quadratic(v, u, m);

  for (const auto& p : inst.binary_forbidden) b.add_quadratic(index.at(p[0]), index.at(p[1]), m);

  for (const auto& t : triples) {
    const auto s = static_cast<Eigen::Index>(index.size() + pair_slack.at({t.q, t.r}));
    b.add_quadratic(t.p, s, m);
    b.add_quadratic(t.q, t.r, m);
    b.add_quadratic(t.q, s, -2.0 * m);
    b.add_quadratic(t.r, s, -2.0 * m);
    b.add_linear(s, 3.0 * m);
  }

  if (!loads.empty()) {
    // (sum_k a_k y_k - C)^2 = sum_k a_k^2 y_k + 2 sum_{k<l} a_k a_l y_k y_l
    //                         - 2 C sum_k a_k y_k + C^2
    std::vector<std::pair<Eigen::Index, double>> terms;
    for (auto [v, c] : loads) terms.emplace_back(v, static_cast<double>(c));
    for (int d = 0; d < digits; ++d)
      terms.emplace_back(n + first_cap_slack + d, static_cast<double>(std::int64_t{1} << d));
    const auto cap = static_cast<double>(*inst.disk_capacity);
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const auto [i, a] = terms[k];
      b.add_linear(i, m * (a * a - 2.0 * cap * a));
      for (std::size_t l = k + 1; l < terms.size(); ++l)
        b.add_quadratic(i, terms[l].first, 2.0 * m * a * terms[l].second);
    }
    out.offset += m * cap * cap;
  }

  out.q = b.build();
  return out;
}

Assignment decode(const Qubo& q, const Bits& x) {
  if (x.size() != q.registry.size())
    throw std::invalid_argument("decode: expected " + std::to_string(q.registry.size()) +
                                " bits, got " + std::to_string(x.size()));
  Assignment a;
  for (std::size_t i = 0; i < q.registry.n(); ++i)
    if (x[i]) a.take(q.registry.decision_vars[i].request_id, q.registry.decision_vars[i].camera);
  return a;
}

Bits complete_slacks(const Instance& inst, const Qubo& q, const Bits& decision_bits) {
  const std::size_t n = q.registry.n();
  if (decision_bits.size() != n) throw std::invalid_argument("complete_slacks: length mismatch");
  Bits x(decision_bits);
  x.resize(q.registry.size(), 0);
  std::int64_t load = 0;
  if (inst.disk_capacity)
    for (std::size_t i = 0; i < n; ++i)
      if (x[i]) {
        const auto& v = q.registry.decision_vars[i];
        load += inst.request(v.request_id).capacity(v.camera);
      }
  int digits = 0;
  for (const auto& s : q.registry.slack_vars)
    if (s.origin == SlackOrigin::CapacityBit) ++digits;
  const std::int64_t room =
      std::clamp<std::int64_t>(inst.disk_capacity.value_or(0) - load, 0,
                               (std::int64_t{1} << digits) - 1);
  for (std::size_t k = 0; k < q.registry.s(); ++k) {
    const auto& s = q.registry.slack_vars[k];
    x[n + k] = s.origin == SlackOrigin::TernaryPair ? (x[s.q] & x[s.r]) : ((room >> s.bit) & 1);
  }
  return x;
}

double min_slack_penalty(const Qubo& q, const Bits& decision_bits) {
  const std::size_t n = q.registry.n(), s = q.registry.s();
  if (decision_bits.size() != n) throw std::invalid_argument("min_slack_penalty: length mismatch");
  if (s > 24) throw std::invalid_argument("min_slack_penalty: more than 24 slack variables");
  double objective = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (decision_bits[i]) objective += q.objective(i);

  Bits x(decision_bits);
  x.resize(n + s, 0);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s); ++mask) {
    for (std::size_t k = 0; k < s; ++k) x[n + k] = (mask >> k) & 1U;
    best = std::min(best, qubo_energy(q, x) - objective);
  }
  return best;
}

std::string qubo_to_json(const Qubo& q) {
  nlohmann::json doc;
  doc["n"] = q.registry.n();
  doc["s"] = q.registry.s();
  doc["offset"] = q.offset;
  doc["m"] = q.penalty_m;
  auto terms = nlohmann::json::array();
  // Column-major storage of a symmetric matrix: column j's entries with
  // row <= j, visited by row, give row-major upper-triangle order after sort.
  std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> upper;
  for (Eigen::Index col = 0; col < q.q.outerSize(); ++col)
    for (Qubo::SparseMatrix::InnerIterator it(q.q, col); it; ++it)
      if (it.row() <= col)
        upper.emplace_back(it.row(), col, it.row() == col ? it.value() : 2.0 * it.value());
  std::sort(upper.begin(), upper.end());
  for (auto [i, j, v] : upper) terms.push_back({i, j, v});
  doc["terms"] = terms;
  return doc.dump() + "\n";
}

}  // namespace smpp
