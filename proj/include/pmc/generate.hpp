#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <type_traits>
#include <variant>
#include <vector>

#include "pmc/core.hpp"
#include "pmc/mcmatrix.hpp"
#include "pmc/pifilter.hpp"

/**
 * @file
 * Simulation of PAR and PIAR series.
 *
 * A PIAR series is generated as the two-step process
 *     (1 - theta_{1,s}L - ... - theta_{m1,s}L^{m1}) X_t = y_t,
 *     psi_s(L) y_t = eps_t,   eps_t ~ N(0, sigma_s^2),
 * with theta derived from seed-vectors. The stationary part y gets a
 * burn-in; the integrated recursion always starts from zeros at t <= 0.
 */
namespace pmc {

/// Mixes (seed, index) into an independent generator seed (SplitMix64 finaliser).
[[nodiscard]] constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

struct SimConfig {
  /// Integration part: eigen information (unit seeds and blocks; `extra`
  /// must be empty) or explicit lag coefficients.
  std::variant<EigenSpec, PeriodicCoefficients> spec;
  std::optional<PeriodicFilter> stationary_part;
  NoiseSpec noise;
  std::size_t n = 0;
  std::size_t burn_in = 0;
  std::uint64_t rng_seed = 0;
};

namespace detail {

/// y_t = sum_i psi_{i,s} y_{t-i} + sigma_s z_t over t = 1-burn_in .. n,
/// returning the last n values (t = 1..n).
[[nodiscard]] inline std::vector<double> stationary_draw(const PeriodicFilter* psi, const NoiseSpec& noise,
                                                         std::size_t n, std::size_t burn_in, Rng& rng) {
  const int d = noise.period();
  const std::size_t total = n + burn_in;
  const int q = psi ? psi->order() : 0;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> y(total, 0.0);
  for (std::size_t i = 0; i < total; ++i) {
    const long t = static_cast<long>(i) + 1 - static_cast<long>(burn_in);
    const int s = season_of(t, d);
    double v = std::sqrt(noise.variance(s)) * normal(rng);
    for (int k = 1; k <= q && static_cast<std::size_t>(k) <= i; ++k) {
      v += psi->at(k, s) * y[i - static_cast<std::size_t>(k)];
    }
    y[i] = v;
  }
  return {y.begin() + static_cast<std::ptrdiff_t>(burn_in), y.end()};
}

}  // namespace detail

[[nodiscard]] inline PeriodicSeries simulate_piar(const SimConfig& config) {
  const int d = config.noise.period();
  require(config.n >= static_cast<std::size_t>(d), ErrorCode::InvalidArgument, "need n >= d");

  const PeriodicFilter integration = std::visit(
      [d](const auto& spec) -> PeriodicFilter {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, EigenSpec>) {
          require(spec.extra.empty(), ErrorCode::InvalidArgument,
                  "stationary dynamics belong in stationary_part, not EigenSpec::extra");
          require(spec.d == d, ErrorCode::PeriodMismatch, "EigenSpec and noise periods differ");
          if (spec.unit_count() == 0) return PeriodicFilter::identity(d);
          return theta_general(spec);
        } else {
          require(spec.period() == d, ErrorCode::PeriodMismatch, "coefficients and noise periods differ");
          return PeriodicFilter(spec);
        }
      },
      config.spec);
  if (config.stationary_part) {
    require(config.stationary_part->period() == d, ErrorCode::PeriodMismatch,
            "stationary part and noise periods differ");
  }

  Rng rng(config.rng_seed);
  const std::vector<double> y = detail::stationary_draw(
      config.stationary_part ? &*config.stationary_part : nullptr, config.noise, config.n, config.burn_in, rng);

  const int q = integration.order();
  std::vector<double> x(config.n, 0.0);
  for (std::size_t i = 0; i < config.n; ++i) {
    const long t = static_cast<long>(i) + 1;
    double v = y[i];
    for (int k = 1; k <= q && static_cast<std::size_t>(k) <= i; ++k) {
      v += integration.at(k, t) * x[i - static_cast<std::size_t>(k)];
    }
    x[i] = v;
  }
  return {std::move(x), d, 1};
}

/// Periodically stationary PAR(p) draw; rejects coefficients whose F_d has
/// an eigenvalue of modulus >= 1.
[[nodiscard]] inline PeriodicSeries simulate_par(const PeriodicCoefficients& coeffs, const NoiseSpec& noise,
                                                 std::size_t n, std::size_t burn_in, std::uint64_t rng_seed) {
  require(coeffs.period() == noise.period(), ErrorCode::PeriodMismatch, "coefficients and noise periods differ");
  if (coeffs.order() > 0) {
    require(spectral_radius(mc_from_coeffs(coeffs)) < 1.0, ErrorCode::NonStationaryCoefficients,
            "multi-companion matrix has an eigenvalue on or outside the unit circle");
  }
  require(n >= 1, ErrorCode::InvalidArgument, "need n >= 1");
  Rng rng(rng_seed);
  const PeriodicFilter psi(coeffs);
  std::vector<double> y = detail::stationary_draw(&psi, noise, n, burn_in, rng);
  return {std::move(y), noise.period(), 1};
}

}  // namespace pmc
