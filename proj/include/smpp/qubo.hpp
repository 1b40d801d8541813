#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "smpp/instance.hpp"

namespace smpp {

enum class SlackOrigin { TernaryPair, CapacityBit };

struct SlackRef {
  SlackOrigin origin = SlackOrigin::TernaryPair;
  // TernaryPair: flattened indices of the substituted pair (q < r).
  std::size_t q = 0, r = 0;
  // CapacityBit: binary digit d, coefficient 2^d.
  int bit = 0;

  bool operator==(const SlackRef&) const = default;
};

/// Decision variables occupy indices [0, n), slacks [n, n + s).
struct VarRegistry {
  std::vector<VarRef> decision_vars;
  std::vector<SlackRef> slack_vars;

  std::size_t n() const { return decision_vars.size(); }
  std::size_t s() const { return slack_vars.size(); }
  std::size_t size() const { return n() + s(); }
};

/// E(x) = x^T Q x + offset over binary x, with Q symmetric. Off-diagonal
/// interaction c x_i x_j is stored as c/2 at (i,j) and (j,i).
template <typename Scalar>
struct QuboModel {
  using SparseMatrix = Eigen::SparseMatrix<Scalar>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  VarRegistry registry;
  SparseMatrix q;
  Scalar offset = Scalar(0);
  Scalar penalty_m = Scalar(1);
  /// Linear objective part (-w per decision variable), length n.
  Vector objective;
  std::vector<std::string> notes;

  Eigen::Index size() const { return q.rows(); }
};

/// H(z) = sum_i h_i z_i + sum_{i != j} J_ij z_i z_j + offset, z_i = 1 - 2 x_i.
template <typename Scalar>
struct IsingModel {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> h;
  Eigen::SparseMatrix<Scalar> j;
  Scalar offset = Scalar(0);

  Eigen::Index size() const { return h.size(); }
};

using Qubo = QuboModel<double>;
using Ising = IsingModel<double>;

/// Accumulates upper-triangular interaction coefficients and produces the
/// symmetric sparse matrix. Terms that cancel to zero are not stored.
template <typename Scalar>
class QuadraticBuilder {
 public:
  explicit QuadraticBuilder(Eigen::Index size) : size_(size) {}

  void add_linear(Eigen::Index i, Scalar v) { add(i, i, v); }

  /// c x_i x_j; i == j folds into the linear term since x^2 = x.
  void add_quadratic(Eigen::Index i, Eigen::Index j, Scalar v) {
    if (i > j) std::swap(i, j);
    add(i, j, v);
  }

  std::size_t interaction_count() const {
    std::size_t k = 0;
    for (const auto& [ij, v] : coeffs_)
      if (ij.first != ij.second && v != Scalar(0)) ++k;
    return k;
  }

  Eigen::SparseMatrix<Scalar> build() const {
    std::vector<Eigen::Triplet<Scalar>> trips;
    for (const auto& [ij, v] : coeffs_) {
      if (v == Scalar(0)) continue;
      auto [i, j] = ij;
      if (i == j) {
        trips.emplace_back(i, i, v);
      } else {
        trips.emplace_back(i, j, v / Scalar(2));
        trips.emplace_back(j, i, v / Scalar(2));
      }
    }
    Eigen::SparseMatrix<Scalar> m(size_, size_);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
  }

 private:
  void add(Eigen::Index i, Eigen::Index j, Scalar v) {
    if (i < 0 || j >= size_) throw std::out_of_range("QuadraticBuilder: index out of range");
    coeffs_[{i, j}] += v;
  }

  Eigen::Index size_;
  std::map<std::pair<Eigen::Index, Eigen::Index>, Scalar> coeffs_;
};

template <typename Scalar>
Scalar qubo_energy(const QuboModel<Scalar>& model, const Bits& x) {
  if (static_cast<Eigen::Index>(x.size()) != model.size())
    throw std::invalid_argument("qubo_energy: bit vector length " + std::to_string(x.size()) +
                                " != " + std::to_string(model.size()));
  Scalar e = Scalar(0);
  for (Eigen::Index col = 0; col < model.q.outerSize(); ++col) {
    if (!x[col]) continue;
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(model.q, col); it; ++it)
      if (x[it.row()]) e += it.value();
  }
  return e + model.offset;
}

/// Energy of the spin configuration z_i = 1 - 2 x_i.
template <typename Scalar>
Scalar ising_energy(const IsingModel<Scalar>& model, const Bits& x) {
  if (static_cast<Eigen::Index>(x.size()) != model.size())
    throw std::invalid_argument("ising_energy: bit vector length mismatch");
  auto spin = [&](Eigen::Index i) { return x[i] ? Scalar(-1) : Scalar(1); };
  Scalar e = Scalar(0);
  for (Eigen::Index i = 0; i < model.size(); ++i) e += model.h(i) * spin(i);
  for (Eigen::Index col = 0; col < model.j.outerSize(); ++col)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(model.j, col); it; ++it)
      e += it.value() * spin(it.row()) * spin(col);
  return e + model.offset;
}

/// Substitutes x_i = (1 - z_i) / 2. With a_i = Q_ii and b_ij = 2 Q_ij (i < j):
///   h_i = -a_i/2 - sum_{j != i} b_ij/4,  J_ij = Q_ij/4,
///   offset += sum_i a_i/2 + sum_{i<j} b_ij/4.
template <typename Scalar>
IsingModel<Scalar> to_ising(const QuboModel<Scalar>& model) {
  const Eigen::Index n = model.size();
  IsingModel<Scalar> out;
  out.h = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  out.offset = model.offset;
  std::vector<Eigen::Triplet<Scalar>> trips;
  for (Eigen::Index col = 0; col < model.q.outerSize(); ++col) {
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(model.q, col); it; ++it) {
      const Eigen::Index row = it.row();
      const Scalar v = it.value();
      if (row == col) {
        out.h(row) -= v / Scalar(2);
        out.offset += v / Scalar(2);
      } else {
        // Each unordered pair is visited twice, once per triangle.
        out.h(row) -= v / Scalar(2);
        out.offset += v / Scalar(4);
        trips.emplace_back(row, col, v / Scalar(4));
      }
    }
  }
  out.j.resize(n, n);
  out.j.setFromTriplets(trips.begin(), trips.end());
  out.j.makeCompressed();
  return out;
}

}  // namespace smpp
