#include "smpp/synthetic.hpp"

#include <algorithm>
#include <set>

#include "smpp/reductor.hpp"
#include "smpp/rng.hpp"

namespace smpp {

namespace {

VarRef random_var(const Request& r, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, r.allowed_cameras.size() - 1);
  return {r.id, r.allowed_cameras[pick(rng)]};
}

template <std::size_t K>
std::vector<std::array<VarRef, K>> random_groups(const std::vector<Request>& reqs, int count,
                                                 Rng& rng) {
  std::vector<std::array<VarRef, K>> out;
  if (static_cast<int>(reqs.size()) < static_cast<int>(K)) return out;
  std::set<std::array<VarRef, K>> seen;
  std::vector<std::size_t> order(reqs.size());
  for (int attempt = 0; static_cast<int>(out.size()) < count && attempt < 50 * count + 50;
       ++attempt) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::array<VarRef, K> g{};
    for (std::size_t k = 0; k < K; ++k) g[k] = random_var(reqs[order[k]], rng);
    auto key = g;
    std::sort(key.begin(), key.end());
    if (seen.insert(key).second) out.push_back(g);
  }
  return out;
}

}  // namespace

Instance random_instance(const SyntheticSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> weight(1, std::max(1, spec.max_weight));
  std::uniform_int_distribution<int> cap(1, std::max(1, spec.max_item_capacity));

  Instance inst;
  inst.name = "synthetic-" + std::to_string(spec.requests) + "-s" + std::to_string(seed);
  for (int i = 0; i < spec.requests; ++i) {
    Request r;
    r.id = i + 1;
    r.weight = weight(rng);
    if (unit(rng) < spec.stereo_fraction) {
      r.kind = RequestKind::Stereo;
      r.allowed_cameras = {kStereoCamera};
    } else {
      r.kind = RequestKind::Mono;
      std::vector<int> cams{1, 2, 3};
      std::shuffle(cams.begin(), cams.end(), rng);
      std::uniform_int_distribution<int> k(1, std::clamp(spec.max_cameras_per_mono, 1, 3));
      cams.resize(k(rng));
      std::sort(cams.begin(), cams.end());
      r.allowed_cameras = cams;
    }
    if (spec.with_capacity)
      for (int c : r.allowed_cameras)
        r.capacity_by_camera[c] = unit(rng) < spec.zero_capacity_fraction ? 0 : cap(rng);
    inst.requests.push_back(std::move(r));
  }
  inst.binary_forbidden = random_groups<2>(inst.requests, spec.binary_constraints, rng);
  inst.ternary_forbidden = random_groups<3>(inst.requests, spec.ternary_constraints, rng);
  if (spec.with_capacity) inst = derive_capacity(inst);
  validate_instance(inst);
  return inst;
}

}  // namespace smpp
