#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include "pmc/core.hpp"
#include "pmc/estimate.hpp"
#include "pmc/mcmatrix.hpp"

/**
 * @file
 * Whole-year forecasts from a fitted periodic model.
 *
 * VS form:  Phi_0 X_T = Phi_1 X_{T-1} + eps_T, so X_{N+H} = (Phi_0^{-1} Phi_1)^H X_N.
 * Multi-companion form: the m-state X_T = F_d X_{T-1} + Omega eps_T.
 * Rows of `point` are years N+1..N+H in VS order (season d first).
 */
namespace pmc {

struct ForecastResult {
  Matrix point;                  ///< H x d
  std::vector<Matrix> err_cov;   ///< h-step covariance: d x d (VS) or m x m (state)
  Matrix lower;                  ///< H x d
  Matrix upper;                  ///< H x d
  double level = 0.95;
  int period = 1;
  long first_time = 1;           ///< time index of season 1 in year N+1

  [[nodiscard]] int horizon() const noexcept { return static_cast<int>(point.rows()); }
};

/// (Phi_0)_{jj} = 1, (Phi_0)_{jk} = -phi_{k-j, d-j+1} for k > j.
[[nodiscard]] inline Matrix phi0_matrix(const PeriodicCoefficients& c) {
  const int d = c.period();
  Matrix phi0 = Matrix::Identity(d, d);
  for (int j = 1; j <= d; ++j) {
    for (int k = j + 1; k <= d; ++k) phi0(j - 1, k - 1) = -c.at(k - j, d - j + 1);
  }
  return phi0;
}

/// (Phi_1)_{jk} = phi_{k+d-j, d-j+1}.
[[nodiscard]] inline Matrix phi1_matrix(const PeriodicCoefficients& c) {
  const int d = c.period();
  Matrix phi1 = Matrix::Zero(d, d);
  for (int j = 1; j <= d; ++j) {
    for (int k = 1; k <= d; ++k) phi1(j - 1, k - 1) = c.at(k + d - j, d - j + 1);
  }
  return phi1;
}

namespace detail {

inline void require_year_end(const PeriodicSeries& x) {
  require(!x.empty() && season_of(x.last_time(), x.period()) == x.period(), ErrorCode::IncompleteYear,
          "the series must end with a complete year (season d)");
}

inline void fill_intervals(ForecastResult& r, double level) {
  require(level > 0.0 && level < 1.0, ErrorCode::InvalidArgument, "confidence level must lie in (0, 1)");
  r.level = level;
  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(normal, 0.5 + level / 2.0);
  const auto h = r.point.rows();
  const auto d = r.point.cols();
  r.lower.resize(h, d);
  r.upper.resize(h, d);
  for (Eigen::Index i = 0; i < h; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double half = z * std::sqrt(std::max(0.0, r.err_cov[static_cast<std::size_t>(i)](j, j)));
      r.lower(i, j) = r.point(i, j) - half;
      r.upper(i, j) = r.point(i, j) + half;
    }
  }
}

}  // namespace detail

[[nodiscard]] inline ForecastResult forecast_vs(const FittedModel& model, const PeriodicSeries& x, int horizon,
                                                double level = 0.95) {
  require(x.period() == model.period, ErrorCode::PeriodMismatch, "model and series periods differ");
  require(horizon >= 0, ErrorCode::InvalidArgument, "horizon must be non-negative");
  require(model.order <= model.period, ErrorCode::OrderTooHigh,
          "the VS forecast needs p <= d; use forecast_mc");
  detail::require_year_end(x);
  const int d = model.period;
  require(x.size() >= static_cast<std::size_t>(d), ErrorCode::InsufficientHistory, "need one complete year");

  const PeriodicCoefficients c = model.full_filter().as_coefficients();
  const Matrix phi0 = phi0_matrix(c);
  const Matrix phi0_inv = phi0.triangularView<Eigen::UnitUpper>().solve(Matrix::Identity(d, d));
  const Matrix step = phi0_inv * phi1_matrix(c);
  const Matrix shock = phi0_inv * model.sigma2.vs_covariance() * phi0_inv.transpose();

  Vector state(d);
  for (int j = 0; j < d; ++j) state(j) = x[x.size() - 1 - static_cast<std::size_t>(j)] - model.mean;

  ForecastResult r;
  r.period = d;
  r.first_time = x.last_time() + 1;
  r.point.resize(horizon, d);
  Matrix cov = Matrix::Zero(d, d);
  Matrix power = Matrix::Identity(d, d);
  for (int h = 0; h < horizon; ++h) {
    state = step * state;
    r.point.row(h) = (state.array() + model.mean).matrix().transpose();
    cov += power * shock * power.transpose();
    power = step * power;
    r.err_cov.push_back(cov);
  }
  detail::fill_intervals(r, level);
  return r;
}

[[nodiscard]] inline ForecastResult forecast_mc(const FittedModel& model, const PeriodicSeries& x, int horizon,
                                                double level = 0.95) {
  require(x.period() == model.period, ErrorCode::PeriodMismatch, "model and series periods differ");
  require(horizon >= 0, ErrorCode::InvalidArgument, "horizon must be non-negative");
  detail::require_year_end(x);
  const int d = model.period;
  const PeriodicCoefficients c = model.full_filter().as_coefficients();
  const int m = std::max(c.order(), d);
  require(x.size() >= static_cast<std::size_t>(m), ErrorCode::InsufficientHistory,
          "need m = max(p, d) = " + std::to_string(m) + " observations");

  const Matrix f = mc_from_coeffs(c).entries();
  const Matrix omega = omega_matrix(c);
  Matrix sigma_eps = Matrix::Zero(m, m);
  sigma_eps.topLeftCorner(d, d) = model.sigma2.vs_covariance();
  const Matrix sigma_u = omega * sigma_eps * omega.transpose();

  Vector state(m);
  for (int j = 0; j < m; ++j) state(j) = x[x.size() - 1 - static_cast<std::size_t>(j)] - model.mean;

  ForecastResult r;
  r.period = d;
  r.first_time = x.last_time() + 1;
  r.point.resize(horizon, d);
  Matrix cov = Matrix::Zero(m, m);
  Matrix power = Matrix::Identity(m, m);
  for (int h = 0; h < horizon; ++h) {
    state = f * state;
    r.point.row(h) = (state.head(d).array() + model.mean).matrix().transpose();
    cov += power * sigma_u * power.transpose();
    power = f * power;
    r.err_cov.push_back(cov);
  }
  detail::fill_intervals(r, level);
  return r;
}

/// One forecast row in time order: point, lower and upper for each step.
struct ForecastPoint {
  long time = 0;
  int season = 1;
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Forecasts in chronological order, truncated to `steps` values when given
/// (sub-year horizons keep the leading part of the first year).
[[nodiscard]] inline std::vector<ForecastPoint> chronological(const ForecastResult& r, long steps = -1) {
  const int d = r.period;
  const long total = static_cast<long>(r.horizon()) * d;
  const long count = steps < 0 ? total : std::min(steps, total);
  std::vector<ForecastPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    const auto year = static_cast<Eigen::Index>(i / d);
    const int season = static_cast<int>(i % d) + 1;
    const Eigen::Index col = d - season;
    out.push_back({r.first_time + i, season, r.point(year, col), r.lower(year, col), r.upper(year, col)});
  }
  return out;
}

/// Back-transform forecasts of a log series by exponentiating point and
/// interval endpoints (no bias correction).
[[nodiscard]] inline std::vector<ForecastPoint> exponentiate(std::vector<ForecastPoint> points) {
  for (ForecastPoint& p : points) {
    p.point = std::exp(p.point);
    p.lower = std::exp(p.lower);
    p.upper = std::exp(p.upper);
  }
  return points;
}

}  // namespace pmc
