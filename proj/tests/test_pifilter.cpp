#include "test_support.hpp"

#include "pmc/pifilter.hpp"

using namespace pmc;
using namespace pmc::testing;

TEST_CASE("theta from the single-root seed") {
  const PeriodicFilter theta = theta_general(model_one_seeds(), {1});
  Matrix expected(4, 1);
  expected << -1.0625, 0.9558823529411764, 0.7076923076923077, -1.391304347826087;
  require_close(theta.coeffs(), expected, 1e-12);
  require_close(alpha_from_seed(model_one_seeds().col(0)).coeffs(), expected, 1e-12);
  REQUIRE(std::abs(expected.prod() - 1.0) < 1e-12);
}

TEST_CASE("theta from two simple seeds") {
  Matrix expected(4, 2);
  expected << -0.7486772486772485, -1.1216931216931219, 1.2641509433962264, 0.17924528301886808,
      -3.723684210526314, 3.8157894736842084, -1.8482758620689663, -1.3034482758620693;
  require_close(theta_general(model_two_seeds(), {1, 1}).coeffs(), expected, 1e-10);
  require_close(theta_two_simple(model_two_seeds()).coeffs(), expected, 1e-10);
}

TEST_CASE("theta from two chained seeds") {
  Matrix expected(4, 2);
  expected << 0.6975308641975312, -0.8395061728395063, 1.2521008403361344, 0.23949579831932785,
      -3.7236842105263137, 3.8157894736842075, -1.8482758620689659, -1.3034482758620691;
  require_close(theta_general(model_two_seeds(), {2}).coeffs(), expected, 1e-10);
  require_close(theta_two_chained(model_two_seeds()).coeffs(), expected, 1e-10);
}

TEST_CASE("theta from three simple seeds") {
  Matrix expected(4, 3);
  expected << -0.1512373149908449, -0.4965941464330426, 0.5458074016102457, 1.8321481113114109,
      0.2770891610202856, 0.9098340274756014, 1.099101561165579, -2.013716849428939, -0.30454912945945645,
      -3.283542467433408, 3.6089466521095375, -6.612124792486127;
  require_close(theta_general(model_three_seeds(), {1, 1, 1}).coeffs(), expected, 1e-10);
}

TEST_CASE("theta is invariant to rescaling seed columns") {
  Matrix scaled = model_three_seeds();
  scaled.col(0) *= -3.5;
  scaled.col(2) *= 0.01;
  require_close(theta_general(scaled, {1, 1, 1}).coeffs(), theta_general(model_three_seeds(), {1, 1, 1}).coeffs(),
                1e-10);
}

TEST_CASE("cascade factors the order-2 PI-filter") {
  const Cascade simple = cascade(model_two_seeds(), false);
  Vector alpha(4);
  alpha << 5.0, 1.3, -0.7884615384615384, -0.1951219512195122;
  Vector beta(4);
  beta << -5.748677248677248, -0.03584905660377369, -2.935222672064776, -1.6531539108494542;
  require_close(simple.alpha.coeffs(), alpha, 1e-12);
  require_close(simple.beta.coeffs(), beta, 1e-10);
  REQUIRE(std::abs(simple.alpha.coeffs().prod() - 1.0) < 1e-10);
  REQUIRE(std::abs(simple.beta.coeffs().prod() - 1.0) < 1e-10);
  require_close(compose(simple.beta, simple.alpha).coeffs(), theta_two_simple(model_two_seeds()).coeffs(), 1e-10);

  const Cascade swapped = cascade(model_two_seeds(), false, 2);
  require_close(compose(swapped.beta, swapped.alpha).coeffs(), theta_two_simple(model_two_seeds()).coeffs(),
                1e-10);

  const Cascade chained = cascade(model_two_seeds(), true);
  require_close(compose(chained.beta, chained.alpha).coeffs(), theta_two_chained(model_two_seeds()).coeffs(),
                1e-10);
  REQUIRE(std::abs(chained.alpha.coeffs().prod() - 1.0) < 1e-10);
  REQUIRE(std::abs(chained.beta.coeffs().prod() - 1.0) < 1e-10);
  REQUIRE(error_code_of([] { (void)cascade(model_two_seeds(), true, 2); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("periodic filters do not commute") {
  Matrix a(2, 1);
  a << 2.0, 3.0;
  Matrix b(2, 1);
  b << 5.0, 7.0;
  const PeriodicFilter alpha(a);
  const PeriodicFilter beta(b);
  // first beta, then alpha: coefficient of X_{t-2} at s = 1 is alpha_1 beta_0 = 2 * 7
  REQUIRE(compose(alpha, beta).at(2, 1) == -14.0);
  REQUIRE(compose(beta, alpha).at(2, 1) == -15.0);
  REQUIRE(compose(alpha, beta).at(1, 1) == 7.0);

  const PeriodicSeries x({0.3, -1.2, 2.5, 0.7, 1.1, -0.4, 0.9, 2.2}, 2);
  const PeriodicSeries sequential = apply_filter(alpha, apply_filter(beta, x));
  const PeriodicSeries direct = apply_filter(compose(alpha, beta), x);
  REQUIRE(sequential.origin() == direct.origin());
  for (std::size_t i = 0; i < direct.size(); ++i) REQUIRE(std::abs(sequential[i] - direct[i]) < 1e-12);
}

TEST_CASE("applying a filter") {
  Matrix a(2, 1);
  a << 1.0, 0.5;
  const PeriodicSeries x({1, 2, 3, 4}, 2);
  const PeriodicSeries y = apply_filter(PeriodicFilter(a), x);
  REQUIRE(y.origin() == 2);
  REQUIRE(y.data() == std::vector<double>{1.5, 1.0, 2.5});
  REQUIRE(error_code_of([&] { (void)apply_filter(PeriodicFilter(Matrix::Zero(2, 4)), x); }) ==
          ErrorCode::SeriesTooShort);
  REQUIRE(error_code_of([&] { (void)apply_filter(PeriodicFilter(Matrix::Zero(3, 1)), x); }) ==
          ErrorCode::PeriodMismatch);
}

TEST_CASE("degenerate seeds") {
  Vector seed(3);
  seed << 1.0, 0.0, 2.0;
  REQUIRE(error_code_of([&] { (void)alpha_from_seed(seed); }) == ErrorCode::ZeroSeedEntry);
  Matrix dependent(4, 2);
  dependent.col(0) = model_two_seeds().col(0);
  dependent.col(1) = 2.0 * dependent.col(0);
  REQUIRE(error_code_of([&] { (void)theta_general(dependent, {1, 1}); }) == ErrorCode::SingularSystem);
  REQUIRE(error_code_of([] { (void)theta_general(Matrix::Ones(2, 3), {1, 1, 1}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("unit-root restriction counts") {
  REQUIRE(unit_root_restrictions({1}) == 1);
  REQUIRE(unit_root_restrictions({1, 1}) == 4);
  REQUIRE(unit_root_restrictions({2}) == 2);
  REQUIRE(unit_root_restrictions({2, 1}) == 5);
  REQUIRE(unit_root_restrictions({3}) == 3);
}
