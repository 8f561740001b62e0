#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pmc/core.hpp"
#include "pmc/generate.hpp"
#include "pmc/mcmatrix.hpp"
#include "pmc/optimize.hpp"
#include "pmc/pifilter.hpp"

/**
 * @file
 * PAR estimation by per-season least squares and two-step PIAR estimation.
 *
 * PIAR step 1 minimises the residual sum of squares of the PI-filtered
 * series over the seed matrix; theta is always obtained by solving the
 * per-season systems at the current seeds, so the unit-root restrictions
 * hold by construction. Step 2 fits a PAR(p - m1) to the filtered series.
 */
namespace pmc {

/// Step-1 criterion. SeasonalLikelihood minimises sum_s n_s log(RSS_s), the
/// concentrated Gaussian likelihood with per-season variances.
enum class SeedObjective { ResidualSumOfSquares, SeasonalLikelihood };

struct FitOptions {
  bool center = true;
  SeedObjective objective = SeedObjective::ResidualSumOfSquares;
  int restarts = 20;
  std::uint64_t seed = 1;
  optim::SimplexOptions simplex{};
  bool polish = true;
};

struct FittedModel {
  int period = 1;
  int order = 0;
  std::vector<int> blocks;
  PeriodicFilter pi_filter;
  PeriodicCoefficients stationary;
  NoiseSpec sigma2;
  Matrix seeds;
  Vector rss_by_season;
  double loglik = 0.0;
  std::size_t n_used = 0;
  /// Overall mean removed before fitting (0 when not centred).
  double mean = 0.0;
  /// Minimised step-1 criterion (PIAR only).
  double objective = 0.0;

  [[nodiscard]] int unit_roots() const noexcept { return pi_filter.order(); }

  /// The full order-p filter: the PI-filter followed by the stationary part.
  [[nodiscard]] PeriodicFilter full_filter() const { return compose(PeriodicFilter(stationary), pi_filter); }
};

/// A model assembled from known parts (no data); n_used and loglik stay 0.
[[nodiscard]] inline FittedModel model_from_parts(PeriodicFilter pi_filter, PeriodicCoefficients stationary,
                                                  NoiseSpec sigma2, std::vector<int> blocks = {}, double mean = 0.0) {
  const int d = sigma2.period();
  require(stationary.period() == d, ErrorCode::PeriodMismatch, "stationary part and noise periods differ");
  if (pi_filter.coeffs().size() == 0 && pi_filter.period() != d) pi_filter = PeriodicFilter::identity(d);
  require(pi_filter.period() == d, ErrorCode::PeriodMismatch, "PI-filter and noise periods differ");
  FittedModel m;
  m.period = d;
  m.order = pi_filter.order() + stationary.order();
  m.blocks = std::move(blocks);
  m.pi_filter = std::move(pi_filter);
  m.stationary = std::move(stationary);
  m.sigma2 = std::move(sigma2);
  m.rss_by_season = Vector::Zero(d);
  m.mean = mean;
  return m;
}

/// Number of free parameters d*p + d (variances) minus the unit-root restrictions.
[[nodiscard]] inline int free_parameter_count(const FittedModel& model) {
  const int restrictions = model.blocks.empty() ? 0 : unit_root_restrictions(model.blocks);
  return model.period * model.order + model.period - restrictions;
}

/// Residuals of the model's full filter applied to x (after removing model.mean).
[[nodiscard]] inline PeriodicSeries residuals(const FittedModel& model, const PeriodicSeries& x) {
  require(x.period() == model.period, ErrorCode::PeriodMismatch, "model and series periods differ");
  return apply_filter(model.full_filter(), x.shifted(model.mean));
}

namespace detail {

/// Per-season least squares of y on its p lags.
[[nodiscard]] inline Matrix per_season_ols(const PeriodicSeries& y, int p) {
  const int d = y.period();
  Matrix phi = Matrix::Zero(d, p);
  if (p == 0) return phi;
  for (int s = 1; s <= d; ++s) {
    std::vector<std::size_t> rows;
    for (std::size_t i = static_cast<std::size_t>(p); i < y.size(); ++i) {
      if (y.season_at(i) == s) rows.push_back(i);
    }
    require(rows.size() >= static_cast<std::size_t>(p), ErrorCode::InsufficientData,
            "too few observations in season " + std::to_string(s));
    Matrix design(static_cast<Eigen::Index>(rows.size()), p);
    Vector target(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto i = rows[r];
      target(static_cast<Eigen::Index>(r)) = y[i];
      for (int k = 1; k <= p; ++k) design(static_cast<Eigen::Index>(r), k - 1) = y[i - static_cast<std::size_t>(k)];
    }
    const Eigen::ColPivHouseholderQR<Matrix> qr(design);
    require(qr.rank() == p, ErrorCode::CollinearLags,
            "lag regressors are collinear in season " + std::to_string(s));
    phi.row(s - 1) = qr.solve(target).transpose();
  }
  return phi;
}

/// Fills sigma2, rss_by_season, loglik and n_used from the model residuals.
inline void finish_fit(FittedModel& model, const PeriodicSeries& x) {
  const PeriodicSeries e = residuals(model, x);
  const int d = model.period;
  Vector rss = Vector::Zero(d);
  Vector count = Vector::Zero(d);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const int s = e.season_at(i) - 1;
    rss(s) += e[i] * e[i];
    count(s) += 1.0;
  }
  Vector s2(d);
  double loglik = 0.0;
  for (int s = 0; s < d; ++s) {
    require(count(s) > 0.0, ErrorCode::InsufficientData, "no residuals in season " + std::to_string(s + 1));
    s2(s) = rss(s) / count(s);
    loglik -= 0.5 * count(s) * (std::log(2.0 * std::numbers::pi * s2(s)) + 1.0);
  }
  model.sigma2 = NoiseSpec(std::move(s2));
  model.rss_by_season = std::move(rss);
  model.loglik = loglik;
  model.n_used = e.size();
}

inline void require_length(const PeriodicSeries& x, int p) {
  const auto need = static_cast<std::size_t>(x.period()) * static_cast<std::size_t>(p + 2);
  require(x.size() >= need, ErrorCode::InsufficientData,
          "need at least d(p+2) = " + std::to_string(need) + " observations, got " + std::to_string(x.size()));
}

/// Canonical seeds. A simple root's column gets unit norm with its first
/// nonzero entry positive. A Jordan chain is only defined up to
/// (c1, c2, ...) -> (k c1, k c2 + j c1, ...), so the whole chain is scaled by
/// the factor that normalises c1 and the later vectors are made orthogonal
/// to c1.
[[nodiscard]] inline Matrix normalize_seeds(Matrix c, const std::vector<int>& blocks) {
  Eigen::Index col = 0;
  for (int r : blocks) {
    const double norm = c.col(col).norm();
    if (norm > 0.0) {
      double factor = 1.0 / norm;
      for (Eigen::Index i = 0; i < c.rows(); ++i) {
        if (c(i, col) != 0.0) {
          if (c(i, col) < 0.0) factor = -factor;
          break;
        }
      }
      c.middleCols(col, r) *= factor;
      for (int k = 1; k < r; ++k) c.col(col + k) -= c.col(col + k).dot(c.col(col)) * c.col(col);
    }
    col += r;
  }
  return c;
}

/// Unconstrained coordinates for seed columns: each column is scaled so
/// that its largest entry (the pivot) is 1 and the remaining d-1 entries
/// are free.
class SeedChart {
 public:
  explicit SeedChart(const Matrix& around) : d_(static_cast<int>(around.rows())), pivot_(around.cols()) {
    for (Eigen::Index j = 0; j < around.cols(); ++j) around.col(j).cwiseAbs().maxCoeff(&pivot_[static_cast<std::size_t>(j)]);
  }

  [[nodiscard]] Eigen::Index dimension() const { return static_cast<Eigen::Index>(pivot_.size()) * (d_ - 1); }

  [[nodiscard]] Vector coordinates(const Matrix& c) const {
    Vector z(dimension());
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      const auto piv = pivot_[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < d_; ++i) {
        if (i != piv) z(k++) = c(i, j) / c(piv, j);
      }
    }
    return z;
  }

  [[nodiscard]] Matrix seeds(const Vector& z) const {
    Matrix c(d_, static_cast<Eigen::Index>(pivot_.size()));
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      const auto piv = pivot_[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < d_; ++i) c(i, j) = (i == piv) ? 1.0 : z(k++);
    }
    return c;
  }

 private:
  int d_;
  std::vector<Eigen::Index> pivot_;
};

/// Step-1 objective: residuals of the PI-filter implied by a seed matrix.
class PiObjective {
 public:
  PiObjective(const PeriodicSeries& x, std::vector<int> blocks,
              SeedObjective kind = SeedObjective::ResidualSumOfSquares)
      : x_(x), blocks_(std::move(blocks)), j_unit_(unit_jordan(blocks_)), kind_(kind) {}

  [[nodiscard]] std::size_t residual_count() const {
    return x_.size() - static_cast<std::size_t>(j_unit_.rows());
  }

  /// Season (0-based) of residual i.
  [[nodiscard]] int season(Eigen::Index i) const {
    return x_.season_at(static_cast<std::size_t>(i) + static_cast<std::size_t>(j_unit_.rows())) - 1;
  }

  /// False when the seeds give a singular or ill-conditioned system.
  bool residuals(const Matrix& seeds, Vector& out) const {
    if (!seeds.allFinite()) return false;
    Matrix theta;
    if (solve_pi_systems(StackedSeeds(seeds, j_unit_).xbind, theta) != 0) return false;
    const auto m1 = static_cast<std::size_t>(theta.cols());
    out.resize(static_cast<Eigen::Index>(residual_count()));
    for (std::size_t i = m1; i < x_.size(); ++i) {
      const int s = x_.season_at(i) - 1;
      double v = x_[i];
      for (std::size_t k = 1; k <= m1; ++k) v -= theta(s, static_cast<Eigen::Index>(k - 1)) * x_[i - k];
      out(static_cast<Eigen::Index>(i - m1)) = v;
    }
    return out.allFinite();
  }

  /// Per-season residual sums of squares and counts.
  void season_sums(const Vector& r, Vector& rss, Vector& count) const {
    const int d = x_.period();
    rss = Vector::Zero(d);
    count = Vector::Zero(d);
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      rss(season(i)) += r(i) * r(i);
      count(season(i)) += 1.0;
    }
  }

  [[nodiscard]] double value(const Matrix& seeds) const {
    Vector r;
    if (!residuals(seeds, r)) return std::numeric_limits<double>::infinity();
    if (kind_ == SeedObjective::ResidualSumOfSquares) return r.squaredNorm();
    Vector rss;
    Vector count;
    season_sums(r, rss, count);
    double v = 0.0;
    for (Eigen::Index s = 0; s < rss.size(); ++s) {
      if (count(s) > 0.0) v += count(s) * std::log(rss(s));
    }
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  }

  [[nodiscard]] SeedObjective kind() const noexcept { return kind_; }

 private:
  const PeriodicSeries& x_;
  std::vector<int> blocks_;
  Matrix j_unit_;
  SeedObjective kind_;
};

/// Seeds spanning the real invariant subspace of an unrestricted PAR(m1)
/// fit for its m1 eigenvalues closest to 1. A complex pair contributes the
/// real and imaginary parts of its eigenvector.
[[nodiscard]] inline Matrix warm_start(const PeriodicSeries& x, int m1) {
  const int d = x.period();
  const PeriodicCoefficients par(per_season_ols(x, m1));
  const Matrix f = mc_from_coeffs(par).entries();
  const Eigen::EigenSolver<Matrix> es(f);
  const auto& values = es.eigenvalues();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Eigen::Index>(i);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(values(a) - 1.0) < std::abs(values(b) - 1.0);
  });
  Matrix c(d, m1);
  int filled = 0;
  for (std::size_t k = 0; k < idx.size() && filled < m1; ++k) {
    const Eigen::Index i = idx[k];
    const Eigen::VectorXcd v = es.eigenvectors().col(i).head(d);
    if (values(i).imag() < 0.0) continue;  // its conjugate supplies both parts
    c.col(filled++) = v.real();
    if (values(i).imag() > 0.0 && filled < m1) c.col(filled++) = v.imag();
  }
  for (std::size_t k = 0; k < idx.size() && filled < m1; ++k) {
    const Eigen::Index i = idx[k];
    if (values(i).imag() < 0.0) c.col(filled++) = es.eigenvectors().col(i).head(d).imag();
  }
  return c;
}

[[nodiscard]] inline Matrix random_seeds(int d, int m1, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix c(d, m1);
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    for (Eigen::Index i = 0; i < c.rows(); ++i) c(i, j) = normal(rng);
    c.col(j).normalize();
  }
  return c;
}

struct SeedSearch {
  Matrix seeds;
  double value = std::numeric_limits<double>::infinity();
};

/// Simplex search from one start followed by an optional least-squares polish.
[[nodiscard]] inline SeedSearch search_from(const PiObjective& objective, const Matrix& start,
                                            const FitOptions& options) {
  SeedSearch out;
  if (!std::isfinite(objective.value(start))) return out;
  const SeedChart chart(start);
  const auto f = [&](const Vector& z) { return objective.value(chart.seeds(z)); };
  const optim::Result simplex = optim::nelder_mead(f, chart.coordinates(start), options.simplex);
  if (!std::isfinite(simplex.value)) return out;
  out.seeds = chart.seeds(simplex.x);
  out.value = simplex.value;
  if (options.polish && chart.dimension() > 0) {
    const auto count = static_cast<int>(objective.residual_count());
    // Least-squares polish; the likelihood criterion is polished as a
    // weighted problem with the season scales of the simplex solution.
    Vector weight = Vector::Ones(count);
    Vector r;
    if (objective.kind() == SeedObjective::SeasonalLikelihood && objective.residuals(out.seeds, r)) {
      Vector rss;
      Vector n;
      objective.season_sums(r, rss, n);
      for (Eigen::Index i = 0; i < count; ++i) {
        const Eigen::Index s = objective.season(i);
        weight(i) = rss(s) > 0.0 ? std::sqrt(n(s) / rss(s)) : 1.0;
      }
    }
    const double penalty = 1e6 * (1.0 + std::sqrt(std::abs(simplex.value)));
    const optim::ResidualMap map = [&](const Vector& z, Vector& res) {
      if (objective.residuals(chart.seeds(z), res)) {
        res.array() *= weight.array();
      } else {
        res = Vector::Constant(count, penalty);
      }
    };
    const optim::Result lm = optim::levenberg_marquardt(map, simplex.x, count);
    const Matrix polished = chart.seeds(lm.x);
    const double v = objective.value(polished);
    if (v < out.value) {
      out.seeds = polished;
      out.value = v;
    }
  }
  return out;
}

}  // namespace detail

/// Unrestricted PAR(p) by per-season least squares.
[[nodiscard]] inline FittedModel fit_par(const PeriodicSeries& x, int p, const FitOptions& options = {}) {
  require(p >= 0, ErrorCode::InvalidArgument, "order must be non-negative");
  detail::require_length(x, p);
  FittedModel model;
  model.period = x.period();
  model.order = p;
  model.mean = options.center ? x.mean() : 0.0;
  const PeriodicSeries xc = x.shifted(model.mean);
  model.pi_filter = PeriodicFilter::identity(x.period());
  model.stationary = PeriodicCoefficients(detail::per_season_ols(xc, p));
  detail::finish_fit(model, x);
  return model;
}

/// Two-step PIAR(p) fit with m1 = sum(blocks) unit roots.
[[nodiscard]] inline FittedModel fit_piar(const PeriodicSeries& x, int p, const std::vector<int>& blocks,
                                          const FitOptions& options = {}) {
  const int d = x.period();
  int m1 = 0;
  for (int b : blocks) {
    require(b >= 1, ErrorCode::InvalidArgument, "Jordan block sizes must be >= 1");
    m1 += b;
  }
  require(m1 >= 1 && m1 <= std::min(p, d), ErrorCode::InvalidArgument,
          "number of unit roots must satisfy 1 <= m1 <= min(p, d)");
  detail::require_length(x, p);

  FittedModel model;
  model.period = d;
  model.order = p;
  model.blocks = blocks;
  model.mean = options.center ? x.mean() : 0.0;
  const PeriodicSeries xc = x.shifted(model.mean);

  const detail::PiObjective objective(xc, blocks, options.objective);
  detail::SeedSearch best;
  const auto consider = [&](const Matrix& start) {
    detail::SeedSearch found = detail::search_from(objective, start, options);
    if (found.value < best.value) best = std::move(found);
  };
  try {
    consider(detail::warm_start(xc, m1));
  } catch (const Error&) {
    // A collinear PAR(m1) warm start is not fatal; random starts follow.
  }
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(substream_seed(options.seed, static_cast<std::uint64_t>(r)));
    consider(detail::random_seeds(d, m1, rng));
  }
  require(std::isfinite(best.value), ErrorCode::OptimizerFailed,
          "no start produced a well-conditioned PI-filter");

  model.seeds = detail::normalize_seeds(best.seeds, blocks);
  model.objective = best.value;
  model.pi_filter = theta_general(model.seeds, blocks);
  const PeriodicSeries y = apply_filter(model.pi_filter, xc);
  model.stationary = PeriodicCoefficients(detail::per_season_ols(y, p - m1));
  detail::finish_fit(model, x);
  return model;
}

/// Information criteria with k = free_parameter_count(model).
[[nodiscard]] inline double aic(const FittedModel& model) {
  return -2.0 * model.loglik + 2.0 * free_parameter_count(model);
}

[[nodiscard]] inline double bic(const FittedModel& model) {
  return -2.0 * model.loglik + free_parameter_count(model) * std::log(static_cast<double>(model.n_used));
}

}  // namespace pmc
