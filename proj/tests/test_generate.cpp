#include "test_support.hpp"

#include "pmc/generate.hpp"

using namespace pmc;
using namespace pmc::testing;

namespace {

SimConfig model_one(std::uint64_t seed, std::size_t n = 240) {
  EigenSpec spec;
  spec.d = 4;
  spec.m = 4;
  spec.blocks = {1};
  spec.seeds = model_one_seeds();
  Vector s2(4);
  s2 << 0.15, 0.46, 0.24, 0.08;
  return SimConfig{spec, std::nullopt, NoiseSpec(s2), n, 0, seed};
}

}  // namespace

TEST_CASE("simulation is reproducible per seed") {
  const PeriodicSeries a = simulate_piar(model_one(7));
  const PeriodicSeries b = simulate_piar(model_one(7));
  const PeriodicSeries c = simulate_piar(model_one(8));
  REQUIRE(a.data() == b.data());
  REQUIRE(a.data() != c.data());
  REQUIRE(a.size() == 240);
  REQUIRE(a.origin() == 1);
}

TEST_CASE("PI-filtering a simulated series returns the innovations") {
  const SimConfig config = model_one(11, 4000);
  const PeriodicSeries x = simulate_piar(config);
  const PeriodicSeries e = apply_filter(theta_general(model_one_seeds(), {1}), x);
  Vector ss = Vector::Zero(4);
  for (std::size_t i = 0; i < e.size(); ++i) ss(e.season_at(i) - 1) += e[i] * e[i];
  ss /= static_cast<double>(e.size() / 4);
  for (int s = 0; s < 4; ++s) {
    const double target = config.noise.sigma2()(s);
    // variance estimate from 1000 draws has relative sd sqrt(2/1000) ~ 0.045
    REQUIRE(std::abs(ss(s) / target - 1.0) < 0.2);
  }
}

TEST_CASE("a stationary part drives the integrated recursion") {
  SimConfig config = model_one(3, 400);
  Matrix psi(4, 1);
  psi << 0.5, -0.3, 0.2, 0.1;
  config.stationary_part = PeriodicFilter(psi);
  config.burn_in = 100;
  const PeriodicSeries x = simulate_piar(config);
  const PeriodicSeries y = apply_filter(theta_general(model_one_seeds(), {1}), x);
  const PeriodicSeries e = apply_filter(PeriodicFilter(psi), y);
  // e should be white: lag-1 products are small relative to the variance
  double cross = 0.0;
  double var = 0.0;
  for (std::size_t i = 1; i < e.size(); ++i) {
    cross += e[i] * e[i - 1];
    var += e[i] * e[i];
  }
  REQUIRE(std::abs(cross / var) < 0.15);
}

TEST_CASE("explicit coefficients and zero noise") {
  Matrix theta(2, 1);
  theta << 2.0, 0.5;
  SimConfig config{PeriodicCoefficients(theta), std::nullopt, NoiseSpec(Vector::Zero(2)), 10, 0, 1};
  const PeriodicSeries x = simulate_piar(config);
  for (double v : x.data()) REQUIRE(v == 0.0);
}

TEST_CASE("stationary PAR simulation") {
  Matrix phi(2, 1);
  phi << 0.5, 0.4;
  const PeriodicSeries x = simulate_par(PeriodicCoefficients(phi), NoiseSpec(Vector::Ones(2)), 100, 50, 5);
  REQUIRE(x.size() == 100);
  phi << 2.0, 0.6;
  REQUIRE(error_code_of([&] {
            (void)simulate_par(PeriodicCoefficients(phi), NoiseSpec(Vector::Ones(2)), 100, 50, 5);
          }) == ErrorCode::NonStationaryCoefficients);
}

TEST_CASE("simulation input validation") {
  SimConfig config = model_one(1);
  config.noise = NoiseSpec(Vector::Ones(3));
  REQUIRE(error_code_of([&] { (void)simulate_piar(config); }) == ErrorCode::PeriodMismatch);
  config = model_one(1, 2);
  REQUIRE(error_code_of([&] { (void)simulate_piar(config); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("substream seeds are distinct") {
  REQUIRE(substream_seed(1, 0) != substream_seed(1, 1));
  REQUIRE(substream_seed(1, 0) != substream_seed(2, 0));
}
