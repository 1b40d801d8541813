#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace smpp {

struct SimplexOptions {
  double tolerance = 1e-6;   // stop once every vertex is this close to the best (inf-norm)
  int max_evals = 5000;
  double initial_step = 0.5;
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex. The best vertex value never increases, so the
/// result is never worse than f(x0).
template <typename F>
SimplexResult minimize_simplex(F&& f, const Eigen::VectorXd& x0, const SimplexOptions& opt) {
  const Eigen::Index dim = x0.size();
  std::vector<Eigen::VectorXd> pts(dim + 1, x0);
  std::vector<double> vals(dim + 1);
  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    return f(x);
  };

  vals[0] = eval(x0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    pts[i + 1](i) += opt.initial_step;
    vals[i + 1] = eval(pts[i + 1]);
  }

  std::vector<std::size_t> order(dim + 1);
  bool converged = false;
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    {
      std::vector<Eigen::VectorXd> p2;
      std::vector<double> v2;
      for (auto k : order) {
        p2.push_back(pts[k]);
        v2.push_back(vals[k]);
      }
      pts.swap(p2);
      vals.swap(v2);
    }

    double size = 0.0;
    for (Eigen::Index i = 1; i <= dim; ++i)
      size = std::max(size, (pts[i] - pts[0]).cwiseAbs().maxCoeff());
    if (dim == 0 || size < opt.tolerance) {
      converged = true;
      break;
    }
    if (evals >= opt.max_evals) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index i = 0; i < dim; ++i) centroid += pts[i];
    centroid /= static_cast<double>(dim);

    const Eigen::VectorXd& worst = pts[dim];
    Eigen::VectorXd reflected = centroid + (centroid - worst);
    const double fr = eval(reflected);
    if (fr < vals[0]) {
      Eigen::VectorXd expanded = centroid + 2.0 * (centroid - worst);
      const double fe = eval(expanded);
      if (fe < fr) {
        pts[dim] = expanded;
        vals[dim] = fe;
      } else {
        pts[dim] = reflected;
        vals[dim] = fr;
      }
      continue;
    }
    if (fr < vals[dim - 1]) {
      pts[dim] = reflected;
      vals[dim] = fr;
      continue;
    }
    const bool outside = fr < vals[dim];
    Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                : Eigen::VectorXd(centroid + 0.5 * (worst - centroid));
    const double fc = eval(contracted);
    if (fc < (outside ? fr : vals[dim])) {
      pts[dim] = contracted;
      vals[dim] = fc;
      continue;
    }
    for (Eigen::Index i = 1; i <= dim; ++i) {
      pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
      vals[i] = eval(pts[i]);
    }
  }
  return {pts[0], vals[0], evals, converged};
}

}  // namespace smpp
