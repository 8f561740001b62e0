#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pmc/core.hpp"
#include "pmc/estimate.hpp"
#include "pmc/generate.hpp"
#include "pmc/pifilter.hpp"

/**
 * @file
 * Seeded Monte Carlo replications of PIAR estimation.
 *
 * Replication r simulates with substream_seed(seed, 2r) and fits with
 * substream_seed(seed, 2r+1), so results do not depend on the thread count.
 */
namespace pmc {

struct McModel {
  std::string name;
  EigenSpec spec;
  NoiseSpec noise;
};

/// The three quarterly models with one, two and three simple unit roots;
/// seeds and innovation variances to two decimals.
[[nodiscard]] inline std::optional<McModel> builtin_model(const std::string& name) {
  Matrix seeds;
  Vector s2(4);
  if (name == "table2:I") {
    seeds.resize(4, 1);
    seeds << -0.64, 0.46, 0.65, 0.68;
    s2 << 0.15, 0.46, 0.24, 0.08;
  } else if (name == "table2:II") {
    seeds.resize(4, 2);
    seeds << 0.08, 0.22, -0.41, 0.29, 0.52, -0.58, 0.40, -0.49;
    s2 << 0.29, 0.37, 0.44, 0.02;
  } else if (name == "table2:III") {
    seeds.resize(4, 3);
    seeds << -0.64, -0.23, -0.30, -0.46, 0.95, 0.91, 0.65, -0.83, 0.47, 0.68, -0.89, -0.15;
    s2 << 0.22, 0.35, 0.25, 0.05;
  } else {
    return std::nullopt;
  }
  const auto m1 = static_cast<int>(seeds.cols());
  EigenSpec spec{4, 4, std::vector<int>(static_cast<std::size_t>(m1), 1), std::move(seeds), {}};
  return McModel{name, std::move(spec), NoiseSpec(std::move(s2))};
}

struct McConfig {
  McModel model;
  std::size_t n = 240;
  std::size_t replications = 200;
  std::uint64_t seed = 1;
  /// 0 picks PMC_THREADS or the hardware concurrency.
  unsigned threads = 0;
  FitOptions fit = [] {
    FitOptions o;
    o.center = false;
    return o;
  }();
};

struct ParameterSummary {
  std::string name;
  double truth = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  double rmse = 0.0;
};

struct McResult {
  std::vector<ParameterSummary> parameters;  ///< theta_{i,s} by lag then season, then sigma_s^2
  std::vector<std::vector<double>> draws;    ///< per successful replication, same order
  std::size_t failures = 0;
};

[[nodiscard]] inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PMC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

[[nodiscard]] inline std::vector<double> parameter_vector(const Matrix& theta, const Vector& sigma2) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < theta.cols(); ++i) {
    for (Eigen::Index s = 0; s < theta.rows(); ++s) out.push_back(theta(s, i));
  }
  for (Eigen::Index s = 0; s < sigma2.size(); ++s) out.push_back(sigma2(s));
  return out;
}

[[nodiscard]] inline std::vector<std::string> parameter_names(int d, int m1) {
  std::vector<std::string> out;
  for (int i = 1; i <= m1; ++i) {
    for (int s = 1; s <= d; ++s) out.push_back("theta_" + std::to_string(i) + "_" + std::to_string(s));
  }
  for (int s = 1; s <= d; ++s) out.push_back("sigma2_" + std::to_string(s));
  return out;
}

}  // namespace detail

[[nodiscard]] inline McResult run_monte_carlo(const McConfig& config) {
  const EigenSpec& spec = config.model.spec;
  const Matrix theta = theta_general(spec).coeffs();
  const std::vector<double> truth = detail::parameter_vector(theta, config.model.noise.sigma2());
  const int p = spec.unit_count();

  std::vector<std::optional<std::vector<double>>> slots(config.replications);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t r = next++; r < config.replications; r = next++) {
      const PeriodicSeries x = simulate_piar(SimConfig{spec, std::nullopt, config.model.noise, config.n, 0,
                                                       substream_seed(config.seed, 2 * r)});
      FitOptions fit = config.fit;
      fit.seed = substream_seed(config.seed, 2 * r + 1);
      try {
        const FittedModel m = fit_piar(x, p, spec.blocks, fit);
        slots[r] = detail::parameter_vector(m.pi_filter.coeffs(), m.sigma2.sigma2());
      } catch (const Error&) {
        slots[r] = std::nullopt;
      }
    }
  };
  const unsigned threads = std::min<unsigned>(resolve_threads(config.threads),
                                              static_cast<unsigned>(std::max<std::size_t>(1, config.replications)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  McResult result;
  for (auto& s : slots) {
    if (s) {
      result.draws.push_back(std::move(*s));
    } else {
      ++result.failures;
    }
  }
  const std::vector<std::string> names = detail::parameter_names(spec.d, p);
  const auto k = static_cast<double>(result.draws.size());
  for (std::size_t j = 0; j < truth.size(); ++j) {
    ParameterSummary ps;
    ps.name = names[j];
    ps.truth = truth[j];
    if (!result.draws.empty()) {
      double sum = 0.0;
      double sq_err = 0.0;
      for (const auto& draw : result.draws) {
        sum += draw[j];
        sq_err += (draw[j] - truth[j]) * (draw[j] - truth[j]);
      }
      ps.mean = sum / k;
      double var = 0.0;
      for (const auto& draw : result.draws) var += (draw[j] - ps.mean) * (draw[j] - ps.mean);
      ps.sd = k > 1 ? std::sqrt(var / (k - 1)) : 0.0;
      ps.rmse = std::sqrt(sq_err / k);
    }
    result.parameters.push_back(std::move(ps));
  }
  return result;
}

}  // namespace pmc
