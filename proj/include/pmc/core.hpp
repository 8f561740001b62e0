#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pmc/error.hpp"

/**
 * @file
 * Periodic series container, season bookkeeping and the vector-of-seasons
 * (VS) view.
 *
 * Time runs t = 1, 2, ... and t = (T-1)d + s is written [T,s] (year T,
 * season s). Storage is always chronological; the VS view stacks each year
 * in descending season order (X_[T,d], ..., X_[T,1]).
 */
namespace pmc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Season of time index t for period d. Defined for every integer t (t <= 0
/// is used internally for pre-sample burn-in); for t >= 1 this is
/// d when t mod d == 0 and t mod d otherwise.
[[nodiscard]] constexpr int season_of(long t, int d) {
  if (d < 1) fail(ErrorCode::InvalidArgument, "period must be >= 1");
  const long r = ((t - 1) % d + d) % d;
  return static_cast<int>(r) + 1;
}

/// Year containing time index t (year 1 holds t = 1..d).
[[nodiscard]] constexpr long year_of(long t, int d) {
  if (d < 1) fail(ErrorCode::InvalidArgument, "period must be >= 1");
  const long shifted = t - 1;
  return (shifted >= 0 ? shifted / d : (shifted - d + 1) / d) + 1;
}

struct SeasonIndex {
  long year = 1;
  int season = 1;

  [[nodiscard]] static constexpr SeasonIndex from_time(long t, int d) {
    return {year_of(t, d), season_of(t, d)};
  }

  [[nodiscard]] constexpr long time(int d) const {
    if (season < 1 || season > d) fail(ErrorCode::SeasonOutOfRange, "season outside [1,d]");
    return (year - 1) * d + season;
  }

  friend constexpr bool operator==(const SeasonIndex&, const SeasonIndex&) = default;
};

/// Univariate periodic observations. `origin` is the time index of the first
/// value, so values()[i] is X_{origin+i}.
class PeriodicSeries {
 public:
  PeriodicSeries() = default;

  PeriodicSeries(std::vector<double> values, int period, long origin = 1)
      : values_(std::move(values)), period_(period), origin_(origin) {
    require(period_ >= 1, ErrorCode::InvalidArgument, "period must be >= 1");
    for (double v : values_) {
      require(std::isfinite(v), ErrorCode::InvalidArgument, "series values must be finite");
    }
  }

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] const std::vector<double>& data() const noexcept { return values_; }
  [[nodiscard]] int period() const noexcept { return period_; }
  [[nodiscard]] long origin() const noexcept { return origin_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  [[nodiscard]] long time_at(std::size_t i) const noexcept {
    return origin_ + static_cast<long>(i);
  }
  [[nodiscard]] int season_at(std::size_t i) const { return season_of(time_at(i), period_); }
  [[nodiscard]] long last_time() const noexcept {
    return origin_ + static_cast<long>(values_.size()) - 1;
  }

  [[nodiscard]] double mean() const {
    if (values_.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum / static_cast<double>(values_.size());
  }

  /// Same times, every value shifted by -offset.
  [[nodiscard]] PeriodicSeries shifted(double offset) const {
    std::vector<double> out(values_);
    for (double& v : out) v -= offset;
    return {std::move(out), period_, origin_};
  }

  /// Values [first, first+count) keeping their time stamps.
  [[nodiscard]] PeriodicSeries slice(std::size_t first, std::size_t count) const {
    require(first + count <= values_.size(), ErrorCode::InvalidArgument, "slice out of range");
    std::vector<double> out(values_.begin() + static_cast<std::ptrdiff_t>(first),
                            values_.begin() + static_cast<std::ptrdiff_t>(first + count));
    return {std::move(out), period_, time_at(first)};
  }

 private:
  std::vector<double> values_;
  int period_ = 1;
  long origin_ = 1;
};

/// Seasonally varying lag coefficients: phi()(s-1, i-1) = phi_{i,s}.
class PeriodicCoefficients {
 public:
  PeriodicCoefficients() = default;

  explicit PeriodicCoefficients(Matrix phi) : phi_(std::move(phi)) {
    require(phi_.rows() >= 1, ErrorCode::InvalidArgument, "coefficients need d >= 1 rows");
    require(phi_.allFinite(), ErrorCode::InvalidArgument, "coefficients must be finite");
  }

  /// d seasons, no lags.
  [[nodiscard]] static PeriodicCoefficients none(int d) { return PeriodicCoefficients(Matrix(d, 0)); }

  [[nodiscard]] const Matrix& phi() const noexcept { return phi_; }
  [[nodiscard]] int period() const noexcept { return static_cast<int>(phi_.rows()); }
  [[nodiscard]] int order() const noexcept { return static_cast<int>(phi_.cols()); }

  /// phi_{lag,season}; seasons wrap with period d, lags beyond the order are 0.
  [[nodiscard]] double at(int lag, long season) const {
    if (lag < 1 || lag > order()) return 0.0;
    return phi_(season_of(season, period()) - 1, lag - 1);
  }

 private:
  Matrix phi_;
};

/// Per-season innovation variances sigma_s^2.
class NoiseSpec {
 public:
  NoiseSpec() = default;

  explicit NoiseSpec(Vector sigma2) : sigma2_(std::move(sigma2)) {
    require(sigma2_.size() >= 1, ErrorCode::InvalidArgument, "noise needs d >= 1 variances");
    for (Eigen::Index i = 0; i < sigma2_.size(); ++i) {
      require(std::isfinite(sigma2_(i)) && sigma2_(i) >= 0.0, ErrorCode::InvalidArgument,
              "noise variances must be finite and non-negative");
    }
  }

  [[nodiscard]] const Vector& sigma2() const noexcept { return sigma2_; }
  [[nodiscard]] int period() const noexcept { return static_cast<int>(sigma2_.size()); }
  [[nodiscard]] double variance(long season) const {
    return sigma2_(season_of(season, period()) - 1);
  }

  /// diag(sigma_d^2, ..., sigma_1^2): the VS-ordered innovation covariance.
  [[nodiscard]] Matrix vs_covariance() const {
    const int d = period();
    Matrix out = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) out(j, j) = sigma2_(d - 1 - j);
    return out;
  }

 private:
  Vector sigma2_;
};

/// Stack complete years into VS vectors (descending season order).
/// The series must start at season 1 and cover whole years.
[[nodiscard]] inline std::vector<Vector> to_vs(const PeriodicSeries& x) {
  const int d = x.period();
  require(x.empty() || season_of(x.origin(), d) == 1, ErrorCode::IncompleteYear,
          "series does not start at season 1");
  require(x.size() % static_cast<std::size_t>(d) == 0, ErrorCode::IncompleteYear,
          "series length " + std::to_string(x.size()) + " is not a multiple of the period " +
              std::to_string(d));
  const std::size_t years = x.size() / static_cast<std::size_t>(d);
  std::vector<Vector> out;
  out.reserve(years);
  for (std::size_t T = 0; T < years; ++T) {
    Vector v(d);
    for (int j = 0; j < d; ++j) v(j) = x[T * d + static_cast<std::size_t>(d - 1 - j)];
    out.push_back(std::move(v));
  }
  return out;
}

/// Inverse of to_vs; the result starts at t = 1.
[[nodiscard]] inline PeriodicSeries from_vs(std::span<const Vector> years, int d) {
  require(d >= 1, ErrorCode::InvalidArgument, "period must be >= 1");
  std::vector<double> values;
  values.reserve(years.size() * static_cast<std::size_t>(d));
  for (const Vector& v : years) {
    require(v.size() == d, ErrorCode::DimensionMismatch,
            "VS vector has length " + std::to_string(v.size()) + ", expected " + std::to_string(d));
    for (int j = d - 1; j >= 0; --j) values.push_back(v(j));
  }
  return {std::move(values), d, 1};
}

/// Largest sub-series made of whole years (drops a leading and a trailing
/// partial year). Time stamps are preserved.
[[nodiscard]] inline PeriodicSeries complete_years(const PeriodicSeries& x) {
  const int d = x.period();
  if (x.empty()) return x;
  std::size_t first = 0;
  while (first < x.size() && x.season_at(first) != 1) ++first;
  if (first >= x.size()) return {{}, d, x.origin()};
  const std::size_t whole = (x.size() - first) / static_cast<std::size_t>(d);
  return x.slice(first, whole * static_cast<std::size_t>(d));
}

}  // namespace pmc
