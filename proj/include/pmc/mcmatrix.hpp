#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pmc/core.hpp"

/**
 * @file
 * Companion and multi-companion matrices.
 *
 * The Markov form of a PAR(p) model uses the m x m companion matrices A_s,
 * m = max(p, d), and the multi-companion matrix F_d = A_d A_{d-1} ... A_1.
 * F_d has d free rows followed by a shifted identity, so an eigenvector of
 * F_d is fixed by its first d entries (its seed-vector) and its eigenvalue.
 * fd_from_eigen() goes the other way: it assembles F_d = X J X^{-1} from
 * seed-vectors and a Jordan structure.
 */
namespace pmc {

inline constexpr double kStructureTolerance = 1e-10;

/// A_s: top row (phi_{1,s}, ..., phi_{m,s}) over a sub-diagonal identity.
class CompanionMatrix {
 public:
  explicit CompanionMatrix(Vector top_row) : top_row_(std::move(top_row)) {
    require(top_row_.size() >= 1, ErrorCode::InvalidArgument, "companion dimension must be >= 1");
  }

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(top_row_.size()); }
  [[nodiscard]] const Vector& top_row() const noexcept { return top_row_; }

  [[nodiscard]] Matrix dense() const {
    const int m = dim();
    Matrix a = Matrix::Zero(m, m);
    a.row(0) = top_row_.transpose();
    if (m > 1) a.bottomLeftCorner(m - 1, m - 1).setIdentity();
    return a;
  }

 private:
  Vector top_row_;
};

/// m x m matrix whose rows d+1..m are the shifted identity (row d+i = e_i').
class MultiCompanion {
 public:
  MultiCompanion(Matrix entries, int order, double tol = kStructureTolerance)
      : entries_(std::move(entries)), order_(order) {
    const Eigen::Index m = entries_.rows();
    require(m >= 1 && entries_.cols() == m, ErrorCode::DimensionMismatch,
            "multi-companion matrix must be square");
    require(order_ >= 1 && order_ <= m, ErrorCode::InvalidArgument,
            "companion order must lie in [1, m]");
    require(entries_.allFinite(), ErrorCode::InvalidArgument, "non-finite matrix entry");
    for (Eigen::Index i = 0; i + order_ < m; ++i) {
      for (Eigen::Index k = 0; k < m; ++k) {
        const double expected = (k == i) ? 1.0 : 0.0;
        require(std::abs(entries_(order_ + i, k) - expected) <= tol, ErrorCode::InvalidArgument,
                "rows below the companion order are not a shifted identity");
      }
    }
  }

  [[nodiscard]] const Matrix& entries() const noexcept { return entries_; }
  [[nodiscard]] int order() const noexcept { return order_; }
  [[nodiscard]] int dim() const noexcept { return static_cast<int>(entries_.rows()); }

 private:
  Matrix entries_;
  int order_;
};

struct ExtraEigen {
  double value = 0.0;  ///< non-unit, non-zero eigenvalue with |value| < 1
  Vector seed;         ///< first d entries of its eigenvector
};

/**
 * Eigen information of a multi-companion matrix with unit roots.
 *
 * `seeds` is X^(1): column i is the seed-vector of the i-th unit-root
 * eigenvector. Within a Jordan block of size r the r consecutive columns form
 * a chain: the first is a proper eigenvector and column k+1 is the
 * generalised eigenvector following column k. `blocks` lists the unit block
 * sizes (r_1, ..., r_g). Eigenvalues not listed in `seeds` or `extra` are 0.
 */
struct EigenSpec {
  int d = 1;
  int m = 1;
  std::vector<int> blocks;
  Matrix seeds;  // d x m1
  std::vector<ExtraEigen> extra;

  [[nodiscard]] int unit_count() const noexcept { return static_cast<int>(seeds.cols()); }

  void validate() const {
    require(d >= 1 && m >= d, ErrorCode::InvalidArgument, "EigenSpec needs 1 <= d <= m");
    require(seeds.rows() == d, ErrorCode::DimensionMismatch, "seed matrix must have d rows");
    const int block_total = std::accumulate(blocks.begin(), blocks.end(), 0);
    require(block_total == unit_count(), ErrorCode::InvalidArgument,
            "unit Jordan block sizes must sum to the number of seed columns");
    for (int r : blocks) require(r >= 1, ErrorCode::InvalidArgument, "Jordan block size must be >= 1");
    require(seeds.allFinite(), ErrorCode::InvalidArgument, "seed entries must be finite");
    for (const ExtraEigen& e : extra) {
      require(e.seed.size() == d, ErrorCode::DimensionMismatch, "extra seed must have length d");
      require(std::abs(e.value) < 1.0 && e.value != 0.0, ErrorCode::InvalidArgument,
              "extra eigenvalues must satisfy 0 < |lambda| < 1");
    }
    require(unit_count() + static_cast<int>(extra.size()) <= m, ErrorCode::InvalidArgument,
            "more eigenvalues than the dimension m");
    if (unit_count() > 0) {
      Eigen::ColPivHouseholderQR<Matrix> qr(seeds);
      require(qr.rank() == unit_count(), ErrorCode::SingularSimilarity,
              "seed-vectors of the unit eigenvalues are linearly dependent");
    }
  }
};

/// A_s with m = max(p, d); lags beyond p are zero.
[[nodiscard]] inline CompanionMatrix companion_from_coeffs(const PeriodicCoefficients& coeffs,
                                                           int season) {
  const int d = coeffs.period();
  const int p = coeffs.order();
  require(season >= 1 && season <= d, ErrorCode::SeasonOutOfRange,
          "season " + std::to_string(season) + " outside [1," + std::to_string(d) + "]");
  const int m = std::max(p, d);
  Vector top = Vector::Zero(m);
  for (int i = 1; i <= p; ++i) top(i - 1) = coeffs.at(i, season);
  return CompanionMatrix(std::move(top));
}

/// F_d = A_d A_{d-1} ... A_1.
[[nodiscard]] inline MultiCompanion mc_from_coeffs(const PeriodicCoefficients& coeffs) {
  const int d = coeffs.period();
  const int m = std::max(coeffs.order(), d);
  Matrix f = Matrix::Identity(m, m);
  for (int s = 1; s <= d; ++s) f = companion_from_coeffs(coeffs, s).dense() * f;
  return MultiCompanion(std::move(f), d);
}

/// Omega = [e_1, (A_d)_{.1}, (A_d A_{d-1})_{.1}, ..., (A_d...A_2)_{.1}, 0].
/// u_T = Omega eps_T links the VS innovations to the multi-companion noise.
[[nodiscard]] inline Matrix omega_matrix(const PeriodicCoefficients& coeffs) {
  const int d = coeffs.period();
  const int m = std::max(coeffs.order(), d);
  Matrix omega = Matrix::Zero(m, m);
  Matrix prod = Matrix::Identity(m, m);
  omega.col(0) = prod.col(0);
  for (int j = 2; j <= d; ++j) {
    // column j uses A_d ... A_{d-j+2}
    prod = prod * companion_from_coeffs(coeffs, d - j + 2).dense();
    omega.col(j - 1) = prod.col(0);
  }
  return omega;
}

/// Full eigenvector from its seed: x_{d+i} = x_i / lambda.
[[nodiscard]] inline Vector extend_seed(const Vector& seed, double lambda, int m) {
  const auto d = static_cast<int>(seed.size());
  require(lambda != 0.0, ErrorCode::ZeroEigenvalue,
          "zero eigenvalues use standard-basis eigenvectors, not seeds");
  require(m >= d && d >= 1, ErrorCode::InvalidArgument, "need m >= d >= 1");
  Vector x(m);
  x.head(d) = seed;
  for (int i = 0; i < m - d; ++i) x(d + i) = x(i) / lambda;
  return x;
}

/// Next vector of a Jordan chain: F x_k = lambda x_k + x_{k-1}. The structural
/// rows give x_k[d+i] = (x_k[i] - x_{k-1}[d+i]) / lambda.
[[nodiscard]] inline Vector extend_chain_seed(const Vector& seed, const Vector& previous,
                                              double lambda, int m) {
  const auto d = static_cast<int>(seed.size());
  require(lambda != 0.0, ErrorCode::ZeroEigenvalue, "chains need a non-zero eigenvalue");
  require(previous.size() == m && m >= d, ErrorCode::DimensionMismatch,
          "chain predecessor must have length m");
  Vector x(m);
  x.head(d) = seed;
  for (int i = 0; i < m - d; ++i) x(d + i) = (x(i) - previous(d + i)) / lambda;
  return x;
}

/// Unit Jordan matrix diag(J_1, ..., J_g) for the given block sizes.
[[nodiscard]] inline Matrix unit_jordan(const std::vector<int>& blocks) {
  const int m1 = std::accumulate(blocks.begin(), blocks.end(), 0);
  Matrix j = Matrix::Identity(m1, m1);
  int offset = 0;
  for (int r : blocks) {
    for (int k = 1; k < r; ++k) j(offset + k - 1, offset + k) = 1.0;
    offset += r;
  }
  return j;
}

struct SimilarityPair {
  Matrix x;  ///< eigenvector / generalised eigenvector columns
  Matrix j;  ///< Jordan matrix, unit blocks top-left
};

/**
 * Assemble X and J. Zero eigenvalues take standard-basis columns e_k with
 * k > m - d (only those are annihilated by the structural rows), tried from
 * e_m downwards and accepted while they keep X full rank.
 */
[[nodiscard]] inline SimilarityPair similarity_from_eigen(const EigenSpec& spec) {
  spec.validate();
  const int m = spec.m;
  const int d = spec.d;
  Matrix x = Matrix::Zero(m, m);
  Matrix j = Matrix::Zero(m, m);
  int col = 0;
  for (int r : spec.blocks) {
    for (int k = 0; k < r; ++k, ++col) {
      const Vector seed = spec.seeds.col(col);
      x.col(col) = (k == 0) ? extend_seed(seed, 1.0, m)
                            : extend_chain_seed(seed, x.col(col - 1), 1.0, m);
      j(col, col) = 1.0;
      if (k > 0) j(col - 1, col) = 1.0;
    }
  }
  for (const ExtraEigen& e : spec.extra) {
    x.col(col) = extend_seed(e.seed, e.value, m);
    j(col, col) = e.value;
    ++col;
  }

  auto rank_of = [](const Matrix& cols) {
    if (cols.cols() == 0) return Eigen::Index{0};
    Eigen::ColPivHouseholderQR<Matrix> qr(cols);
    qr.setThreshold(1e-12);
    return qr.rank();
  };
  Eigen::Index rank = rank_of(x.leftCols(col));
  require(rank == col, ErrorCode::SingularSimilarity,
          "eigenvectors of the non-zero eigenvalues are linearly dependent");
  for (int k = m - 1; k >= m - d && col < m; --k) {
    x.col(col) = Vector::Unit(m, k);
    const Eigen::Index trial = rank_of(x.leftCols(col + 1));
    if (trial > rank) {
      rank = trial;
      ++col;
    } else {
      x.col(col).setZero();
    }
  }
  require(col == m, ErrorCode::SingularSimilarity,
          "no standard-basis completion keeps the similarity matrix nonsingular");
  return {std::move(x), std::move(j)};
}

/// F_d = X J X^{-1} from eigen information.
[[nodiscard]] inline MultiCompanion fd_from_eigen(const EigenSpec& spec) {
  SimilarityPair sim = similarity_from_eigen(spec);
  Eigen::FullPivLU<Matrix> lu(sim.x);
  require(lu.isInvertible(), ErrorCode::SingularSimilarity, "similarity matrix X is singular");
  const Eigen::JacobiSVD<Matrix> svd(sim.x);
  const Vector sv = svd.singularValues();
  require(sv(sv.size() - 1) > 0.0 && sv(0) / sv(sv.size() - 1) < 1e12,
          ErrorCode::SingularSimilarity, "similarity matrix X is numerically singular");
  Matrix f = sim.x * sim.j * lu.inverse();
  // The structural rows hold exactly in exact arithmetic; snap the rounding.
  const int m = spec.m;
  for (int i = 0; i + spec.d < m; ++i) {
    f.row(spec.d + i).setZero();
    f(spec.d + i, i) = 1.0;
  }
  return MultiCompanion(std::move(f), spec.d);
}

[[nodiscard]] inline std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
  if (a.rows() == 0) return {};
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  const auto ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// Number of eigenvalues within `tol` of 1.
[[nodiscard]] inline int unit_root_count(const MultiCompanion& f, double tol = 1e-6) {
  require(tol > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
  const auto ev = eigenvalues(f.entries());
  return static_cast<int>(std::count_if(ev.begin(), ev.end(), [tol](std::complex<double> z) {
    return std::abs(z - 1.0) < tol;
  }));
}

/// Largest eigenvalue modulus of F_d.
[[nodiscard]] inline double spectral_radius(const MultiCompanion& f) {
  double r = 0.0;
  for (auto z : eigenvalues(f.entries())) r = std::max(r, std::abs(z));
  return r;
}

}  // namespace pmc
