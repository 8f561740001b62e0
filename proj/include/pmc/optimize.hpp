#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

/**
 * @file
 * Small unconstrained minimisers used by the PIAR estimator: a Nelder-Mead
 * simplex search (tolerates +inf objective values, which mark infeasible
 * points) and a finite-difference Levenberg-Marquardt polish for
 * least-squares objectives.
 */
namespace pmc::optim {

using Vector = Eigen::VectorXd;

struct SimplexOptions {
  int max_iterations = 5000;
  double relative_tolerance = 1e-12;
  double initial_step = 0.1;
};

struct Result {
  Vector x;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

template <class Objective>
[[nodiscard]] Result nelder_mead(Objective&& f, const Vector& x0, const SimplexOptions& options = {}) {
  const auto n = x0.size();
  std::vector<Vector> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> vals(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double step = options.initial_step * std::max(1.0, std::abs(x0(i)));
    pts[static_cast<std::size_t>(i + 1)](i) += step;
  }
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);

  std::vector<std::size_t> order(pts.size());
  Result result;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];
    const double fbest = vals[best];
    const double fworst = vals[worst];
    if (std::isfinite(fworst) &&
        fworst - fbest <= options.relative_tolerance * std::abs(fbest) + std::numeric_limits<double>::min()) {
      result.converged = true;
      break;
    }
    if (!std::isfinite(fbest)) break;

    Vector centroid = Vector::Zero(n);
    for (std::size_t k = 0; k + 1 < order.size(); ++k) centroid += pts[order[k]];
    centroid /= static_cast<double>(n);

    const Vector reflected = centroid + (centroid - pts[worst]);
    const double fr = f(reflected);
    if (fr < fbest) {
      const Vector expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < fworst;
    const Vector contracted =
        outside ? Vector(centroid + 0.5 * (reflected - centroid)) : Vector(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = f(contracted);
    if (fc < (outside ? fr : fworst)) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t k = 1; k < order.size(); ++k) {
      const std::size_t idx = order[k];
      pts[idx] = pts[best] + 0.5 * (pts[idx] - pts[best]);
      vals[idx] = f(pts[idx]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  result.x = pts[best];
  result.value = vals[best];
  result.iterations = it;
  return result;
}

/// Residual map r(x) in R^m; the objective is |r(x)|^2.
using ResidualMap = std::function<void(const Vector& x, Vector& residual)>;

namespace detail {

struct ResidualFunctor : Eigen::DenseFunctor<double> {
  ResidualFunctor(ResidualMap map, int inputs, int values)
      : Eigen::DenseFunctor<double>(inputs, values), map_(std::move(map)) {}

  int operator()(const InputType& x, ValueType& fvec) const {
    map_(x, fvec);
    return 0;
  }

 private:
  ResidualMap map_;
};

}  // namespace detail

/// Levenberg-Marquardt with a forward-difference Jacobian, started at x0.
[[nodiscard]] inline Result levenberg_marquardt(const ResidualMap& map, const Vector& x0, int residual_count,
                                                int max_evaluations = 2000) {
  using Functor = detail::ResidualFunctor;
  Functor functor(map, static_cast<int>(x0.size()), residual_count);
  Eigen::NumericalDiff<Functor> numeric(functor);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Functor>> lm(numeric);
  lm.setMaxfev(max_evaluations);
  lm.setXtol(1e-14);
  lm.setFtol(1e-14);
  Vector x = x0;
  const auto status = lm.minimize(x);
  Vector r(residual_count);
  map(x, r);
  Result out;
  out.x = x;
  out.value = r.squaredNorm();
  out.iterations = static_cast<int>(lm.iterations());
  out.converged = status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters;
  return out;
}

}  // namespace pmc::optim
