#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pmc/core.hpp"
#include "pmc/mcmatrix.hpp"

/**
 * @file
 * Periodic filters and the PI-filter parametrisation from seed-vectors.
 *
 * A periodic filter of order q maps x to y_t = x_t - sum_i a_{i,s(t)} x_{t-i}.
 * Sequential application does not commute and is not the per-season product
 * of polynomials; compose() carries the season shift of the inner filter.
 *
 * The PI-filter (1 - theta_{1,s} L - ... - theta_{m1,s} L^{m1}) removing m1
 * unit roots is obtained from the seed matrix X^(1) (d x m1) and the unit
 * Jordan matrix by solving, for every season s, the m1 x m1 system
 *
 *     Xbind[:, d-s+2 .. d-s+m1+1] theta(s) = Xbind[:, d-s+1]      (1-based)
 *
 * with Xbind = [X^(1) J_unit ; X^(1)]' of size m1 x 2d.
 */
namespace pmc {

/// Per-season lag filter 1 - sum_i a_{i,s} L^i; coeffs()(s-1, i-1) = a_{i,s}.
class PeriodicFilter {
 public:
  PeriodicFilter() = default;

  explicit PeriodicFilter(Matrix coeffs) : coeffs_(std::move(coeffs)) {
    require(coeffs_.rows() >= 1, ErrorCode::InvalidArgument, "filter needs d >= 1 rows");
    require(coeffs_.allFinite(), ErrorCode::InvalidArgument, "filter coefficients must be finite");
  }

  explicit PeriodicFilter(const PeriodicCoefficients& c) : PeriodicFilter(c.phi()) {}

  [[nodiscard]] static PeriodicFilter identity(int d) { return PeriodicFilter(Matrix(d, 0)); }

  [[nodiscard]] const Matrix& coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] int period() const noexcept { return static_cast<int>(coeffs_.rows()); }
  [[nodiscard]] int order() const noexcept { return static_cast<int>(coeffs_.cols()); }

  /// a_{lag,season}; seasons wrap, out-of-range lags are 0.
  [[nodiscard]] double at(int lag, long season) const {
    if (lag < 1 || lag > order()) return 0.0;
    return coeffs_(season_of(season, period()) - 1, lag - 1);
  }

  [[nodiscard]] PeriodicCoefficients as_coefficients() const { return PeriodicCoefficients(coeffs_); }

 private:
  Matrix coeffs_;
};

[[nodiscard]] inline PeriodicSeries apply_filter(const PeriodicFilter& f, const PeriodicSeries& x) {
  require(f.period() == x.period(), ErrorCode::PeriodMismatch, "filter and series periods differ");
  const int q = f.order();
  require(x.size() > static_cast<std::size_t>(q), ErrorCode::SeriesTooShort,
          "series of length " + std::to_string(x.size()) + " is too short for a filter of order " +
              std::to_string(q));
  const int d = f.period();
  const Matrix& a = f.coeffs();
  std::vector<double> out(x.size() - static_cast<std::size_t>(q));
  for (std::size_t i = static_cast<std::size_t>(q); i < x.size(); ++i) {
    const int s = season_of(x.time_at(i), d) - 1;
    double v = x[i];
    for (int k = 1; k <= q; ++k) v -= a(s, k - 1) * x[i - static_cast<std::size_t>(k)];
    out[i - static_cast<std::size_t>(q)] = v;
  }
  return {std::move(out), d, x.origin() + q};
}

/// Filter equal to applying `inner` first, then `outer`.
[[nodiscard]] inline PeriodicFilter compose(const PeriodicFilter& outer, const PeriodicFilter& inner) {
  require(outer.period() == inner.period(), ErrorCode::PeriodMismatch, "filter periods differ");
  const int d = outer.period();
  const int qa = outer.order();
  const int qb = inner.order();
  Matrix r = Matrix::Zero(d, qa + qb);
  for (int s = 1; s <= d; ++s) {
    for (int k = 1; k <= qa + qb; ++k) {
      double v = outer.at(k, s) + inner.at(k, s);
      for (int i = 1; i <= qa && i < k; ++i) {
        if (k - i <= qb) v -= outer.at(i, s) * inner.at(k - i, s - i);
      }
      r(s - 1, k - 1) = v;
    }
  }
  return PeriodicFilter(std::move(r));
}

/// Xbind = [X^(1) J_unit ; X^(1)]', an m1 x 2d matrix.
struct StackedSeeds {
  Matrix xbind;

  StackedSeeds(const Matrix& seeds, const Matrix& j_unit) {
    require(j_unit.rows() == seeds.cols() && j_unit.cols() == seeds.cols(),
            ErrorCode::DimensionMismatch, "J_unit must be m1 x m1");
    const auto d = seeds.rows();
    const auto m1 = seeds.cols();
    xbind.resize(m1, 2 * d);
    xbind.leftCols(d) = (seeds * j_unit).transpose();
    xbind.rightCols(d) = seeds.transpose();
  }

  [[nodiscard]] int period() const noexcept { return static_cast<int>(xbind.cols() / 2); }
};

/// Per-season systems with a larger condition number are rejected.
inline constexpr double kMaxSystemCondition = 1e12;

namespace detail {

/// Solves the d per-season systems into `theta` (d x m1). Returns 0 on
/// success, otherwise the first season whose system is singular or has an
/// (estimated, 1-norm) condition number above kMaxSystemCondition.
[[nodiscard]] inline int solve_pi_systems(const Matrix& xbind, Matrix& theta) {
  const auto m1 = xbind.rows();
  const auto d = xbind.cols() / 2;
  theta.resize(d, m1);
  for (Eigen::Index s = 1; s <= d; ++s) {
    // 1-based columns d-s+2 .. d-s+m1+1 on the left, d-s+1 on the right.
    const Matrix a = xbind.middleCols(d - s + 1, m1);
    const Eigen::PartialPivLU<Matrix> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond >= 1.0 / kMaxSystemCondition)) return static_cast<int>(s);
    theta.row(s - 1) = lu.solve(Vector(xbind.col(d - s))).transpose();
    if (!theta.row(s - 1).allFinite()) return static_cast<int>(s);
  }
  return 0;
}

}  // namespace detail

/**
 * PI-filter of order m1 from seed-vectors and unit Jordan block sizes.
 * Throws SingularSystem (naming the season) when a per-season system is
 * singular or ill-conditioned.
 */
[[nodiscard]] inline PeriodicFilter theta_general(const Matrix& seeds, const std::vector<int>& blocks) {
  const auto d = static_cast<int>(seeds.rows());
  const auto m1 = static_cast<int>(seeds.cols());
  require(d >= 1, ErrorCode::InvalidArgument, "seed matrix needs d >= 1 rows");
  require(m1 >= 1 && m1 <= d, ErrorCode::InvalidArgument,
          "number of unit roots must lie in [1, d]");
  require(seeds.allFinite(), ErrorCode::InvalidArgument, "seed entries must be finite");
  const StackedSeeds stacked(seeds, unit_jordan(blocks));
  Matrix theta;
  if (const int bad = detail::solve_pi_systems(stacked.xbind, theta); bad != 0) {
    fail(ErrorCode::SingularSystem,
         "PI-parameter system is singular or ill-conditioned at season " + std::to_string(bad));
  }
  return PeriodicFilter(std::move(theta));
}

[[nodiscard]] inline PeriodicFilter theta_general(const EigenSpec& spec) {
  require(spec.seeds.rows() == spec.d, ErrorCode::DimensionMismatch, "seed matrix must have d rows");
  return theta_general(spec.seeds, spec.blocks);
}

/// Unit PI-filter alpha_s = c^(d-s+1) / c^(d-s+2), with c^(d+1) = c^(1).
[[nodiscard]] inline PeriodicFilter alpha_from_seed(const Vector& seed) {
  const auto d = static_cast<int>(seed.size());
  require(d >= 1, ErrorCode::InvalidArgument, "seed must be non-empty");
  for (int j = 0; j < d; ++j) {
    require(seed(j) != 0.0, ErrorCode::ZeroSeedEntry,
            "seed entry " + std::to_string(j + 1) + " is zero");
  }
  Matrix alpha(d, 1);
  for (int s = 1; s <= d; ++s) {
    const int num = d - s + 1;                     // 1-based
    const int den = (d - s + 2 > d) ? 1 : d - s + 2;
    alpha(s - 1, 0) = seed(num - 1) / seed(den - 1);
  }
  return PeriodicFilter(std::move(alpha));
}

namespace detail {

/// Seed entry c_i^(j) for j in [1, d+2], extended past d by the wraparound
/// rule: c^(d+k) = c^(k) (simple) or c_2^(d+k) = c_2^(k) - c_1^(k) (chained).
class ExtendedSeeds {
 public:
  ExtendedSeeds(const Matrix& seeds, bool chained) : seeds_(seeds), chained_(chained) {
    require(seeds_.cols() == 2, ErrorCode::DimensionMismatch, "expected a d x 2 seed matrix");
    require(seeds_.rows() >= 2, ErrorCode::InvalidArgument, "two unit roots need d >= 2");
    require(seeds_.allFinite(), ErrorCode::InvalidArgument, "seed entries must be finite");
  }

  [[nodiscard]] int period() const { return static_cast<int>(seeds_.rows()); }

  [[nodiscard]] double operator()(int root, int j) const {
    const int d = period();
    if (j <= d) return seeds_(j - 1, root - 1);
    const int k = j - d;
    if (chained_ && root == 2) return seeds_(k - 1, 1) - seeds_(k - 1, 0);
    return seeds_(k - 1, root - 1);
  }

  [[nodiscard]] double delta(int i, int j) const {
    const auto& c = *this;
    return c(1, i) * c(2, j) - c(1, j) * c(2, i);
  }

  [[nodiscard]] double scale() const { return seeds_.cwiseAbs().maxCoeff(); }

 private:
  const Matrix& seeds_;
  bool chained_;
};

inline void require_nonzero(double denominator, double scale, const char* what) {
  if (!(std::abs(denominator) > 1e-14 * scale)) {
    fail(ErrorCode::DegenerateSeeds, std::string("vanishing denominator in ") + what);
  }
}

[[nodiscard]] inline PeriodicFilter theta_two_closed_form(const Matrix& seeds, bool chained) {
  const ExtendedSeeds c(seeds, chained);
  const int d = c.period();
  const double scale2 = c.scale() * c.scale();
  Matrix theta(d, 2);
  for (int s = 1; s <= d; ++s) {
    const double den = c.delta(d - s + 2, d - s + 3);
    require_nonzero(den, scale2, "theta closed form");
    theta(s - 1, 0) = c.delta(d - s + 1, d - s + 3) / den;
    theta(s - 1, 1) = c.delta(d - s + 2, d - s + 1) / den;
  }
  return PeriodicFilter(std::move(theta));
}

}  // namespace detail

/// Order-2 PI-filter for two simple unit roots (closed form of the Delta ratios).
[[nodiscard]] inline PeriodicFilter theta_two_simple(const Matrix& seeds) {
  return detail::theta_two_closed_form(seeds, false);
}

/// Order-2 PI-filter for two chained unit roots (same ratios, chained wraparound).
[[nodiscard]] inline PeriodicFilter theta_two_chained(const Matrix& seeds) {
  return detail::theta_two_closed_form(seeds, true);
}

struct Cascade {
  PeriodicFilter alpha;  ///< applied first
  PeriodicFilter beta;   ///< applied to (1 - alpha_s L) x
};

/**
 * Factor the order-2 PI-filter into (1 - beta_s L)(1 - alpha_s L), two unit
 * PI-filters. For simple roots `first_root` (1 or 2) picks which random walk
 * alpha removes; both choices give the same theta. Chained roots admit only
 * first_root = 1 (alpha breaks the Jordan chain).
 */
[[nodiscard]] inline Cascade cascade(const Matrix& seeds, bool chained, int first_root = 1) {
  require(first_root == 1 || first_root == 2, ErrorCode::InvalidArgument,
          "first_root must be 1 or 2");
  require(!chained || first_root == 1, ErrorCode::InvalidArgument,
          "the chained cascade is unique; first_root must be 1");
  const detail::ExtendedSeeds c(seeds, chained);
  const int d = c.period();
  const int i1 = first_root;
  const int i2 = 3 - first_root;
  const double scale = c.scale();

  Matrix alpha(d, 1);
  for (int s = 1; s <= d; ++s) {
    const double den = c(i1, d - s + 2);
    detail::require_nonzero(den, scale, "alpha");
    alpha(s - 1, 0) = c(i1, d - s + 1) / den;
  }
  Matrix beta(d, 1);
  for (int s = 1; s <= d; ++s) {
    const double a_s = alpha(s - 1, 0);
    const double a_prev = alpha(s >= 2 ? s - 2 : d - 1, 0);
    const double den = c(i2, d - s + 2) - a_prev * c(i2, d - s + 3);
    detail::require_nonzero(den, scale, "beta");
    beta(s - 1, 0) = (c(i2, d - s + 1) - a_s * c(i2, d - s + 2)) / den;
  }
  return {PeriodicFilter(std::move(alpha)), PeriodicFilter(std::move(beta))};
}

/// Number of restrictions the unit-root structure imposes on d*m1 free
/// PI-coefficients: the dimension of the commutant of J_unit,
/// sum_{i,j} min(r_i, r_j).
[[nodiscard]] inline int unit_root_restrictions(const std::vector<int>& blocks) {
  int total = 0;
  for (int a : blocks) {
    for (int b : blocks) total += std::min(a, b);
  }
  return total;
}

}  // namespace pmc
