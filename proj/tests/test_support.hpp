#pragma once

#include <catch_amalgamated.hpp>

#include "pmc/core.hpp"

namespace pmc::testing {

inline Matrix model_one_seeds() {
  Matrix c(4, 1);
  c << -0.64, 0.46, 0.65, 0.68;
  return c;
}

inline Matrix model_two_seeds() {
  Matrix c(4, 2);
  c << 0.08, 0.22, -0.41, 0.29, 0.52, -0.58, 0.40, -0.49;
  return c;
}

inline Matrix model_three_seeds() {
  Matrix c(4, 3);
  c << -0.64, -0.23, -0.30, -0.46, 0.95, 0.91, 0.65, -0.83, 0.47, 0.68, -0.89, -0.15;
  return c;
}

inline void require_close(const Matrix& a, const Matrix& b, double tol) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      INFO("entry (" << i << "," << j << "): " << a(i, j) << " vs " << b(i, j));
      REQUIRE(std::abs(a(i, j) - b(i, j)) <= tol);
    }
  }
}

template <class F>
ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected pmc::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace pmc::testing
