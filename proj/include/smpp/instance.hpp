#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace smpp {

/// Stereo requests use the virtual camera 4 (cameras 1 and 3 together).
inline constexpr int kStereoCamera = 4;

using Bits = std::vector<std::uint8_t>;

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Schema, Semantic };

  ParseError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

enum class RequestKind { Mono, Stereo };

struct Request {
  int id = 0;
  RequestKind kind = RequestKind::Mono;
  double weight = 0.0;
  std::vector<int> allowed_cameras;              // ascending, unique
  std::map<int, std::int64_t> capacity_by_camera;  // absent key: 0

  std::int64_t capacity(int camera) const {
    auto it = capacity_by_camera.find(camera);
    return it == capacity_by_camera.end() ? 0 : it->second;
  }

  bool operator==(const Request&) const = default;
};

struct VarRef {
  int request_id = 0;
  int camera = 0;

  auto operator<=>(const VarRef&) const = default;
};

using ForbiddenPair = std::array<VarRef, 2>;
using ForbiddenTriple = std::array<VarRef, 3>;

struct Instance {
  std::string name;
  std::vector<Request> requests;
  std::vector<ForbiddenPair> binary_forbidden;
  std::vector<ForbiddenTriple> ternary_forbidden;
  std::optional<std::int64_t> disk_capacity;

  bool operator==(const Instance&) const = default;

  bool has_capacity() const { return disk_capacity.has_value(); }
  const Request& request(int id) const;
};

/// Maps (request, camera) pairs to flattened decision-variable indices.
/// Order: requests in instance order, cameras ascending within a request.
class VariableIndex {
 public:
  explicit VariableIndex(const Instance& inst);

  std::size_t size() const { return vars_.size(); }
  const std::vector<VarRef>& vars() const { return vars_; }
  const VarRef& operator[](std::size_t i) const { return vars_[i]; }

  std::optional<std::size_t> find(const VarRef& v) const;
  /// Throws std::out_of_range for unknown pairs.
  std::size_t at(const VarRef& v) const;

 private:
  std::vector<VarRef> vars_;
  std::map<VarRef, std::size_t> index_;
};

/// A set of taken (request, camera) pairs. The map view is well defined only
/// when every request appears at most once; `decode` may produce assignments
/// where it does not, and those fail the Once check in `check_feasible`.
class Assignment {
 public:
  Assignment() = default;

  static Assignment from_choices(const std::map<int, int>& chosen);
  static Assignment from_bits(const VariableIndex& index, const Bits& bits);

  void take(int request_id, int camera);
  void drop(int request_id, int camera);
  bool empty() const { return taken_.empty(); }
  const std::vector<VarRef>& taken() const { return taken_; }

  /// First camera recorded for the request, if any.
  std::optional<int> camera_of(int request_id) const;
  std::map<int, int> chosen() const;

  Bits flatten(const VariableIndex& index) const;

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<VarRef> taken_;  // sorted, unique
};

Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

/// Throws ParseError(Semantic) on the first violated invariant.
void validate_instance(const Instance& inst);

std::size_t variable_count(const Instance& inst);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace smpp
