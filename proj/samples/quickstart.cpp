// Simulate the single-unit-root quarterly model, fit a PIAR(1) and forecast
// two years ahead.

#include <cstdio>

#include "pmc/diagnostics.hpp"
#include "pmc/estimate.hpp"
#include "pmc/forecast.hpp"
#include "pmc/generate.hpp"
#include "pmc/montecarlo.hpp"

int main() {
  using namespace pmc;
  const McModel model = *builtin_model("table2:I");
  const PeriodicSeries x = simulate_piar(SimConfig{model.spec, std::nullopt, model.noise, 240, 0, 7});

  FitOptions options;
  options.center = false;
  const FittedModel fit = fit_piar(x, 1, {1}, options);
  const Matrix truth = theta_general(model.spec).coeffs();
  std::printf("season  theta (true)  theta (fitted)  sigma^2 (fitted)\n");
  for (int s = 0; s < 4; ++s) {
    std::printf("%6d  %12.6g  %14.6g  %16.6g\n", s + 1, truth(s, 0), fit.pi_filter.coeffs()(s, 0),
                fit.sigma2.sigma2()(s));
  }
  std::printf("product of fitted theta: %.6g\n", fit.pi_filter.coeffs().prod());

  const TestReport lr = lr_unit_root_test(x, 1, {1}, options);
  std::printf("Q_LR = %.6g against %.6g: %s\n", lr.statistic, lr.critical_value,
              lr.reject ? "unit root rejected" : "unit root not rejected");

  for (const ForecastPoint& f : chronological(forecast_vs(fit, x, 2))) {
    std::printf("t=%ld s=%d  %.6g  [%.6g, %.6g]\n", f.time, f.season, f.point, f.lower, f.upper);
  }
}
