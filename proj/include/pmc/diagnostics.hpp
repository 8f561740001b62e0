#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "pmc/core.hpp"
#include "pmc/estimate.hpp"
#include "pmc/forecast.hpp"

/**
 * @file
 * Residual diagnostics, the likelihood-ratio unit-root test, information
 * criteria and forecast accuracy.
 */
namespace pmc {

struct PeriodicACF {
  Matrix rho;            ///< d x L; rho(s-1, l-1) pairs X_[T,s] with X_[T,s]-l
  std::size_t years = 0; ///< N
  double bound = 0.0;    ///< 1.96 / sqrt(N)

  [[nodiscard]] int period() const noexcept { return static_cast<int>(rho.rows()); }
  [[nodiscard]] int max_lag() const noexcept { return static_cast<int>(rho.cols()); }
};

/**
 * Season-aligned residual autocorrelations
 *     rho(s, l) = sum_T e_[T,s] e_[T,s]-l / sqrt(sum_T e_[T,s]^2 sum_T e_[T,s]-l^2),
 * summing over the years in which both terms are observed. Residuals are
 * taken to have mean zero, so no mean is subtracted.
 */
[[nodiscard]] inline PeriodicACF periodic_acf(const PeriodicSeries& resid, int max_lag) {
  require(max_lag >= 1, ErrorCode::InvalidArgument, "maximum lag must be >= 1");
  const int d = resid.period();
  const std::size_t years = resid.size() / static_cast<std::size_t>(d);
  require(years >= static_cast<std::size_t>(max_lag) + 2, ErrorCode::InsufficientData,
          "need at least L+2 = " + std::to_string(max_lag + 2) + " years of residuals");
  bool any_nonzero = false;
  for (double v : resid.data()) any_nonzero = any_nonzero || v != 0.0;
  require(any_nonzero, ErrorCode::DegenerateVariance, "residuals are identically zero");

  PeriodicACF acf;
  acf.rho = Matrix::Zero(d, max_lag);
  acf.years = years;
  acf.bound = 1.96 / std::sqrt(static_cast<double>(years));
  for (int l = 1; l <= max_lag; ++l) {
    Vector cross = Vector::Zero(d);
    Vector lead = Vector::Zero(d);
    Vector lag = Vector::Zero(d);
    for (std::size_t i = static_cast<std::size_t>(l); i < resid.size(); ++i) {
      const int s = resid.season_at(i) - 1;
      const double a = resid[i];
      const double b = resid[i - static_cast<std::size_t>(l)];
      cross(s) += a * b;
      lead(s) += a * a;
      lag(s) += b * b;
    }
    for (int s = 0; s < d; ++s) {
      const double denom = std::sqrt(lead(s) * lag(s));
      require(denom > 0.0, ErrorCode::DegenerateVariance,
              "season " + std::to_string(s + 1) + " residuals have zero variance");
      acf.rho(s, l - 1) = cross(s) / denom;
    }
  }
  return acf;
}

struct TestReport {
  std::string name;
  double statistic = 0.0;
  /// Secondary statistic where one exists (Q_LR without cross-season terms).
  std::optional<double> companion;
  double critical_value = 0.0;
  int df = 0;               ///< 0 when the critical value is tabulated rather than chi-squared
  std::string source;
  bool reject = false;      ///< statistic > critical_value at the 5% level
};

/// One portmanteau statistic Q_s = N sum_l rho(s,l)^2 per season, df = L - p.
[[nodiscard]] inline std::vector<TestReport> mcleod_stat(const PeriodicACF& acf, int p_fitted) {
  const int df = acf.max_lag() - p_fitted;
  require(df >= 1, ErrorCode::InvalidArgument, "maximum lag must exceed the fitted order");
  const boost::math::chi_squared_distribution<double> chi2(df);
  const double critical = boost::math::quantile(chi2, 0.95);
  std::vector<TestReport> out;
  for (int s = 0; s < acf.period(); ++s) {
    TestReport r;
    r.name = "McLeod Q_" + std::to_string(s + 1);
    r.statistic = static_cast<double>(acf.years) * acf.rho.row(s).squaredNorm();
    r.critical_value = critical;
    r.df = df;
    r.source = "chi-squared(" + std::to_string(df) + ") 0.95 quantile";
    r.reject = r.statistic > critical;
    out.push_back(std::move(r));
  }
  return out;
}

/// 5% critical values of the trace statistic without deterministic terms,
/// indexed by the number of unit roots (Johansen 1995, Table 15.1).
[[nodiscard]] inline std::optional<double> johansen_trace_critical_95(int unit_roots) {
  switch (unit_roots) {
    case 1: return 4.14;
    case 2: return 12.21;
    case 3: return 24.08;
    default: return std::nullopt;
  }
}

/// d x d residual cross-product matrix (1/N) sum_T e_T e_T' over VS years.
[[nodiscard]] inline Matrix residual_product_matrix(const std::vector<Vector>& years) {
  require(!years.empty(), ErrorCode::InsufficientData, "no complete residual years");
  const auto d = years.front().size();
  Matrix s = Matrix::Zero(d, d);
  for (const Vector& e : years) s += e * e.transpose();
  return s / static_cast<double>(years.size());
}

struct LrStatistic {
  double value = 0.0;
  /// N sum_s log(S0_ss / S_ss): the same ratio with cross-season terms
  /// dropped; never negative when the null is nested in the alternative.
  double diagonal_value = 0.0;
  Matrix s0;
  Matrix s;
  std::size_t years = 0;
};

/// Q_LR = N log(|S_0| / |S|) over the complete years both residual series cover.
[[nodiscard]] inline LrStatistic lr_statistic(const PeriodicSeries& resid_null, const PeriodicSeries& resid_alt) {
  require(resid_null.period() == resid_alt.period(), ErrorCode::PeriodMismatch, "residual periods differ");
  const int d = resid_null.period();
  const long first = std::max(resid_null.origin(), resid_alt.origin());
  const long last = std::min(resid_null.last_time(), resid_alt.last_time());
  require(last >= first, ErrorCode::AlignmentError, "residual series do not overlap");
  const auto common = [&](const PeriodicSeries& e) {
    return complete_years(e.slice(static_cast<std::size_t>(first - e.origin()), static_cast<std::size_t>(last - first + 1)));
  };
  const PeriodicSeries a = common(resid_null);
  const PeriodicSeries b = common(resid_alt);
  LrStatistic out;
  out.s0 = residual_product_matrix(to_vs(a));
  out.s = residual_product_matrix(to_vs(b));
  out.years = a.size() / static_cast<std::size_t>(d);
  const double det0 = out.s0.determinant();
  const double det1 = out.s.determinant();
  require(det0 > 0.0 && det1 > 0.0, ErrorCode::DegenerateVariance, "residual product matrix is singular");
  const auto n = static_cast<double>(out.years);
  out.value = n * std::log(det0 / det1);
  out.diagonal_value = n * (out.s0.diagonal().array().log() - out.s.diagonal().array().log()).sum();
  return out;
}

/// PIAR(p) with the given unit-root blocks against an unrestricted PAR(p).
/// The restricted model is fitted by the seasonal likelihood criterion.
[[nodiscard]] inline TestReport lr_unit_root_test(const PeriodicSeries& x, int p, const std::vector<int>& blocks,
                                                  FitOptions options = {}) {
  options.objective = SeedObjective::SeasonalLikelihood;
  int m1 = 0;
  for (int b : blocks) m1 += b;
  const auto critical = johansen_trace_critical_95(m1);
  require(critical.has_value(), ErrorCode::InvalidArgument,
          "no stored critical value for " + std::to_string(m1) + " unit roots");
  FittedModel null_model;
  FittedModel alt_model;
  try {
    null_model = fit_piar(x, p, blocks, options);
    alt_model = fit_par(x, p, options);
  } catch (const Error& e) {
    fail(ErrorCode::FitFailed, std::string("model fit failed: ") + e.what());
  }
  const LrStatistic q = lr_statistic(residuals(null_model, x), residuals(alt_model, x));
  TestReport r;
  r.name = "Q_LR";
  r.statistic = q.value;
  r.companion = q.diagonal_value;
  r.critical_value = *critical;
  r.source = "Johansen (1995) Table 15.1, 95% trace quantile, " + std::to_string(m1) + " unit root(s)";
  r.reject = r.statistic > r.critical_value;
  return r;
}

struct FitMetrics {
  double aic = 0.0;
  double bic = 0.0;
  std::vector<double> mape;  ///< cumulative over the first h steps, percent
  std::vector<double> rmse;  ///< cumulative over the first h steps
};

/// Forecast accuracy on `holdout` (original scale). With `log_scale` the
/// forecasts are exponentiated before comparison.
[[nodiscard]] inline FitMetrics fit_metrics(const FittedModel& model, const PeriodicSeries& holdout,
                                            const ForecastResult& forecasts, bool log_scale = false) {
  require(holdout.period() == forecasts.period, ErrorCode::AlignmentError, "holdout and forecast periods differ");
  require(holdout.origin() == forecasts.first_time, ErrorCode::AlignmentError,
          "holdout must start at the first forecast time");
  const auto points = chronological(forecasts);
  require(holdout.size() <= points.size(), ErrorCode::AlignmentError, "holdout is longer than the forecast horizon");
  FitMetrics out;
  out.aic = aic(model);
  out.bic = bic(model);
  double abs_pct = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < holdout.size(); ++i) {
    const double f = log_scale ? std::exp(points[i].point) : points[i].point;
    const double a = holdout[i];
    const double err = f - a;
    abs_pct += (a != 0.0) ? std::abs(err / a) : std::numeric_limits<double>::infinity();
    sq += err * err;
    const auto k = static_cast<double>(i + 1);
    out.mape.push_back(100.0 * abs_pct / k);
    out.rmse.push_back(std::sqrt(sq / k));
  }
  return out;
}

struct NormalitySummary {
  double skewness = 0.0;
  double kurtosis = 0.0;  ///< excess kurtosis (0 for a normal sample)
  std::vector<double> theoretical;  ///< normal quantiles at (i - 0.5) / n
  std::vector<double> sample;       ///< sorted season-standardised residuals
};

/// Moments and QQ data of residuals scaled by their per-season root mean square.
[[nodiscard]] inline NormalitySummary normality_summary(const PeriodicSeries& resid) {
  const int d = resid.period();
  require(resid.size() >= 3, ErrorCode::InsufficientData, "need at least 3 residuals");
  Vector ss = Vector::Zero(d);
  Vector count = Vector::Zero(d);
  for (std::size_t i = 0; i < resid.size(); ++i) {
    ss(resid.season_at(i) - 1) += resid[i] * resid[i];
    count(resid.season_at(i) - 1) += 1.0;
  }
  std::vector<double> z(resid.size());
  for (std::size_t i = 0; i < resid.size(); ++i) {
    const int s = resid.season_at(i) - 1;
    const double scale = std::sqrt(ss(s) / count(s));
    require(scale > 0.0, ErrorCode::DegenerateVariance, "season " + std::to_string(s + 1) + " residuals are zero");
    z[i] = resid[i] / scale;
  }
  const auto n = static_cast<double>(z.size());
  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= n;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double v : z) {
    const double c = v - mean;
    m2 += c * c;
    m3 += c * c * c;
    m4 += c * c * c * c;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  NormalitySummary out;
  out.skewness = m3 / std::pow(m2, 1.5);
  out.kurtosis = m4 / (m2 * m2) - 3.0;
  std::sort(z.begin(), z.end());
  out.sample = std::move(z);
  const boost::math::normal_distribution<double> normal;
  for (std::size_t i = 0; i < out.sample.size(); ++i) {
    out.theoretical.push_back(boost::math::quantile(normal, (static_cast<double>(i) + 0.5) / n));
  }
  return out;
}

}  // namespace pmc
