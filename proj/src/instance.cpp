#include "smpp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace smpp {

using json = nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& msg) {
  throw ParseError(ParseError::Kind::Schema, "schema error: " + msg);
}

[[noreturn]] void semantic_error(const std::string& msg) {
  throw ParseError(ParseError::Kind::Semantic, "semantic error: " + msg);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where + ": missing field '" + key + "'");
  return *it;
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) schema_error(where + ": expected integer");
  return v.get<int>();
}

std::int64_t as_capacity(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where + ": expected number");
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (!std::isfinite(d) || d != std::floor(d))
      semantic_error(where + ": capacity must be an integer");
    if (d < 0) semantic_error(where + ": capacity must be non-negative");
    return static_cast<std::int64_t>(d);
  }
  if (v.is_number_unsigned()) return static_cast<std::int64_t>(v.get<std::uint64_t>());
  auto c = v.get<std::int64_t>();
  if (c < 0) semantic_error(where + ": capacity must be non-negative");
  return c;
}

VarRef parse_varref(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) schema_error(where + ": expected [request, camera]");
  return {as_int(v[0], where), as_int(v[1], where)};
}

template <std::size_t K>
std::array<VarRef, K> parse_group(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != K)
    schema_error(where + ": expected " + std::to_string(K) + " variable references");
  std::array<VarRef, K> out{};
  for (std::size_t k = 0; k < K; ++k) out[k] = parse_varref(v[k], where);
  return out;
}

json varref_json(const VarRef& v) { return json::array({v.request_id, v.camera}); }

std::string describe(const VarRef& v) {
  return "(" + std::to_string(v.request_id) + "," + std::to_string(v.camera) + ")";
}

template <std::size_t K>
void check_group(const Instance& inst, const std::array<VarRef, K>& group,
                 std::set<std::array<VarRef, K>>& seen, const char* label) {
  for (const auto& v : group) {
    auto it = std::find_if(inst.requests.begin(), inst.requests.end(),
                           [&](const Request& r) { return r.id == v.request_id; });
    if (it == inst.requests.end())
      semantic_error(std::string(label) + " references unknown request " + describe(v));
    if (!std::binary_search(it->allowed_cameras.begin(), it->allowed_cameras.end(), v.camera))
      semantic_error(std::string(label) + " references disallowed camera " + describe(v));
  }
  auto sorted = group;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    semantic_error(std::string(label) + " repeats a variable");
  if (!seen.insert(sorted).second) semantic_error(std::string("duplicate ") + label);
}

}  // namespace

const Request& Instance::request(int id) const {
  for (const auto& r : requests)
    if (r.id == id) return r;
  throw std::out_of_range("unknown request id " + std::to_string(id));
}

VariableIndex::VariableIndex(const Instance& inst) {
  for (const auto& r : inst.requests)
    for (int cam : r.allowed_cameras) {
      index_.emplace(VarRef{r.id, cam}, vars_.size());
      vars_.push_back({r.id, cam});
    }
}

std::optional<std::size_t> VariableIndex::find(const VarRef& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t VariableIndex::at(const VarRef& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) throw std::out_of_range("no variable for " + describe(v));
  return it->second;
}

Assignment Assignment::from_choices(const std::map<int, int>& chosen) {
  Assignment a;
  for (auto [req, cam] : chosen) a.take(req, cam);
  return a;
}

Assignment Assignment::from_bits(const VariableIndex& index, const Bits& bits) {
  if (bits.size() < index.size())
    throw std::invalid_argument("bit vector shorter than the decision variable count");
  Assignment a;
  for (std::size_t i = 0; i < index.size(); ++i)
    if (bits[i]) a.taken_.push_back(index[i]);
  std::sort(a.taken_.begin(), a.taken_.end());
  return a;
}

void Assignment::take(int request_id, int camera) {
  VarRef v{request_id, camera};
  auto it = std::lower_bound(taken_.begin(), taken_.end(), v);
  if (it == taken_.end() || *it != v) taken_.insert(it, v);
}

void Assignment::drop(int request_id, int camera) {
  VarRef v{request_id, camera};
  auto it = std::lower_bound(taken_.begin(), taken_.end(), v);
  if (it != taken_.end() && *it == v) taken_.erase(it);
}

std::optional<int> Assignment::camera_of(int request_id) const {
  auto it = std::lower_bound(taken_.begin(), taken_.end(), VarRef{request_id, 0});
  if (it == taken_.end() || it->request_id != request_id) return std::nullopt;
  return it->camera;
}

std::map<int, int> Assignment::chosen() const {
  std::map<int, int> out;
  for (const auto& v : taken_) out.emplace(v.request_id, v.camera);
  return out;
}

Bits Assignment::flatten(const VariableIndex& index) const {
  Bits bits(index.size(), 0);
  for (const auto& v : taken_) bits[index.at(v)] = 1;
  return bits;
}

void validate_instance(const Instance& inst) {
  std::set<int> ids;
  for (const auto& r : inst.requests) {
    const std::string where = "request " + std::to_string(r.id);
    if (!ids.insert(r.id).second) semantic_error("duplicate request id " + std::to_string(r.id));
    if (!(r.weight >= 0.0) || !std::isfinite(r.weight))
      semantic_error(where + ": weight must be a non-negative number");
    if (r.allowed_cameras.empty()) semantic_error(where + ": no allowed cameras");
    if (!std::is_sorted(r.allowed_cameras.begin(), r.allowed_cameras.end()) ||
        std::adjacent_find(r.allowed_cameras.begin(), r.allowed_cameras.end()) !=
            r.allowed_cameras.end())
      semantic_error(where + ": allowed cameras must be unique");
    if (r.kind == RequestKind::Stereo) {
      if (r.allowed_cameras != std::vector<int>{kStereoCamera})
        semantic_error(where + ": stereo requests must use exactly camera 4");
    } else {
      for (int cam : r.allowed_cameras)
        if (cam < 1 || cam > 3) semantic_error(where + ": mono cameras must be in {1,2,3}");
    }
    for (const auto& [cam, cap] : r.capacity_by_camera) {
      if (!std::binary_search(r.allowed_cameras.begin(), r.allowed_cameras.end(), cam))
        semantic_error(where + ": capacity given for camera " + std::to_string(cam) +
                       " which is not allowed");
      if (cap < 0) semantic_error(where + ": negative capacity");
    }
  }
  if (inst.disk_capacity && *inst.disk_capacity < 0)
    semantic_error("disk_capacity must be non-negative");

  std::set<ForbiddenPair> pairs;
  for (const auto& p : inst.binary_forbidden) check_group(inst, p, pairs, "binary constraint");
  std::set<ForbiddenTriple> triples;
  for (const auto& t : inst.ternary_forbidden)
    check_group(inst, t, triples, "ternary constraint");
}

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(ParseError::Kind::Syntax, std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object()) schema_error("top level must be an object");

  Instance inst;
  const auto& name = require(doc, "name", "instance");
  if (!name.is_string()) schema_error("name: expected string");
  inst.name = name.get<std::string>();

  const auto& requests = require(doc, "requests", "instance");
  if (!requests.is_array()) schema_error("requests: expected array");
  for (std::size_t k = 0; k < requests.size(); ++k) {
    const auto& rj = requests[k];
    const std::string where = "requests[" + std::to_string(k) + "]";
    if (!rj.is_object()) schema_error(where + ": expected object");
    Request r;
    r.id = as_int(require(rj, "id", where), where + ".id");

    const auto& kind = require(rj, "kind", where);
    if (kind == "mono")
      r.kind = RequestKind::Mono;
    else if (kind == "stereo")
      r.kind = RequestKind::Stereo;
    else
      schema_error(where + ".kind: expected \"mono\" or \"stereo\"");

    const auto& weight = require(rj, "weight", where);
    if (!weight.is_number()) schema_error(where + ".weight: expected number");
    r.weight = weight.get<double>();
    if (r.weight < 0) semantic_error(where + ": negative weight");

    const auto& cams = require(rj, "allowed_cameras", where);
    if (!cams.is_array()) schema_error(where + ".allowed_cameras: expected array");
    for (const auto& c : cams) r.allowed_cameras.push_back(as_int(c, where + ".allowed_cameras"));
    std::sort(r.allowed_cameras.begin(), r.allowed_cameras.end());

    if (auto it = rj.find("capacity_by_camera"); it != rj.end()) {
      if (!it->is_object()) schema_error(where + ".capacity_by_camera: expected object");
      for (const auto& [key, value] : it->items()) {
        int cam = 0;
        try {
          std::size_t used = 0;
          cam = std::stoi(key, &used);
          if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
          schema_error(where + ".capacity_by_camera: key '" + key + "' is not a camera id");
        }
        r.capacity_by_camera[cam] = as_capacity(value, where + ".capacity_by_camera");
      }
    }
    inst.requests.push_back(std::move(r));
  }

  const auto& pairs = require(doc, "binary_forbidden", "instance");
  if (!pairs.is_array()) schema_error("binary_forbidden: expected array");
  for (const auto& p : pairs) inst.binary_forbidden.push_back(parse_group<2>(p, "binary_forbidden"));

  const auto& triples = require(doc, "ternary_forbidden", "instance");
  if (!triples.is_array()) schema_error("ternary_forbidden: expected array");
  for (const auto& t : triples)
    inst.ternary_forbidden.push_back(parse_group<3>(t, "ternary_forbidden"));

  if (auto it = doc.find("disk_capacity"); it != doc.end() && !it->is_null()) {
    if (!it->is_number()) schema_error("disk_capacity: expected integer");
    inst.disk_capacity = as_capacity(*it, "disk_capacity");
  }

  validate_instance(inst);
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  json doc;
  doc["name"] = inst.name;
  doc["requests"] = json::array();
  for (const auto& r : inst.requests) {
    json rj;
    rj["id"] = r.id;
    rj["kind"] = r.kind == RequestKind::Stereo ? "stereo" : "mono";
    rj["weight"] = r.weight;
    rj["allowed_cameras"] = r.allowed_cameras;
    if (!r.capacity_by_camera.empty()) {
      json caps = json::object();
      for (const auto& [cam, cap] : r.capacity_by_camera) caps[std::to_string(cam)] = cap;
      rj["capacity_by_camera"] = caps;
    }
    doc["requests"].push_back(rj);
  }
  doc["binary_forbidden"] = json::array();
  for (const auto& p : inst.binary_forbidden)
    doc["binary_forbidden"].push_back({varref_json(p[0]), varref_json(p[1])});
  doc["ternary_forbidden"] = json::array();
  for (const auto& t : inst.ternary_forbidden)
    doc["ternary_forbidden"].push_back({varref_json(t[0]), varref_json(t[1]), varref_json(t[2])});
  if (inst.disk_capacity) doc["disk_capacity"] = *inst.disk_capacity;
  return doc.dump(2) + "\n";
}

std::size_t variable_count(const Instance& inst) {
  std::size_t n = 0;
  for (const auto& r : inst.requests) n += r.allowed_cameras.size();
  return n;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_instance(inst);
}

}  // namespace smpp
