#include "smpp/reductor.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "smpp/rng.hpp"

namespace smpp {

namespace {

template <std::size_t K>
bool survives(const std::array<VarRef, K>& group, const std::set<int>& kept) {
  return std::all_of(group.begin(), group.end(),
                     [&](const VarRef& v) { return kept.count(v.request_id) > 0; });
}

template <std::size_t K>
std::vector<int> request_ids(const std::array<VarRef, K>& group) {
  std::vector<int> ids;
  for (const auto& v : group)
    if (std::find(ids.begin(), ids.end(), v.request_id) == ids.end()) ids.push_back(v.request_id);
  return ids;
}

bool has_capacity_data(const Instance& inst) {
  return std::any_of(inst.requests.begin(), inst.requests.end(),
                     [](const Request& r) { return !r.capacity_by_camera.empty(); });
}

}  // namespace

Instance reduce(const Instance& src, const ReductionSpec& spec) {
  const int n = static_cast<int>(src.requests.size());
  if (spec.target_requests < 1) throw std::invalid_argument("target_requests must be >= 1");
  if (spec.target_requests > n)
    throw std::invalid_argument("target_requests (" + std::to_string(spec.target_requests) +
                                ") exceeds source request count (" + std::to_string(n) + ")");

  Rng rng(spec.seed);
  const std::size_t n_binary = src.binary_forbidden.size();
  std::vector<std::size_t> picks(n_binary + src.ternary_forbidden.size());
  for (std::size_t i = 0; i < picks.size(); ++i) picks[i] = i;
  std::shuffle(picks.begin(), picks.end(), rng);

  const auto target = static_cast<std::size_t>(spec.target_requests);
  std::vector<int> selected;  // pick order
  std::set<int> kept;
  std::size_t last_pick_start = 0;
  for (std::size_t p : picks) {
    if (selected.size() >= target) break;
    auto ids = p < n_binary ? request_ids(src.binary_forbidden[p])
                            : request_ids(src.ternary_forbidden[p - n_binary]);
    last_pick_start = selected.size();
    for (int id : ids)
      if (kept.insert(id).second) selected.push_back(id);
  }

  // The overshooting pick's new requests belong to no constraint among the
  // earlier picks; drop them from the back until the target is met.
  while (selected.size() > target && selected.size() > last_pick_start) {
    kept.erase(selected.back());
    selected.pop_back();
  }

  bool uniform_fill = false;
  if (selected.size() < target) {
    uniform_fill = true;
    std::vector<int> rest;
    for (const auto& r : src.requests)
      if (!kept.count(r.id)) rest.push_back(r.id);
    std::shuffle(rest.begin(), rest.end(), rng);
    for (int id : rest) {
      if (selected.size() >= target) break;
      kept.insert(id);
      selected.push_back(id);
    }
  }

  Instance out;
  char name[64];
  std::snprintf(name, sizeof name, "g%03d%s-s%llu", spec.target_requests,
                spec.with_capacity ? "c" : "", static_cast<unsigned long long>(spec.seed));
  out.name = name;
  if (uniform_fill) out.name += "-uniform";
  for (const auto& r : src.requests)
    if (kept.count(r.id)) out.requests.push_back(r);
  for (const auto& p : src.binary_forbidden)
    if (survives(p, kept)) out.binary_forbidden.push_back(p);
  for (const auto& t : src.ternary_forbidden)
    if (survives(t, kept)) out.ternary_forbidden.push_back(t);

  if (spec.with_capacity) {
    if (!has_capacity_data(out))
      throw std::invalid_argument("capacity variant requested but the reduced requests carry no "
                                  "capacity data");
    return derive_capacity(out);
  }
  return strip_capacity(out);
}

std::int64_t capacity_total(const Instance& inst) {
  std::int64_t total = 0;
  for (const auto& r : inst.requests) {
    std::int64_t cheapest = r.capacity(r.allowed_cameras.front());
    for (int cam : r.allowed_cameras) cheapest = std::min(cheapest, r.capacity(cam));
    total += cheapest;
  }
  return total;
}

Instance derive_capacity(const Instance& inst) {
  if (!has_capacity_data(inst))
    throw std::invalid_argument("derive_capacity: no request has per-camera capacities");
  Instance out = inst;
  const std::int64_t t = capacity_total(inst);
  out.disk_capacity = (t + 1) / 2;
  return out;
}

Instance strip_capacity(const Instance& inst) {
  Instance out = inst;
  for (auto& r : out.requests) r.capacity_by_camera.clear();
  out.disk_capacity.reset();
  return out;
}

}  // namespace smpp
