#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "model_json.hpp"
#include "pmc/csv.hpp"
#include "pmc/diagnostics.hpp"
#include "pmc/estimate.hpp"
#include "pmc/forecast.hpp"
#include "pmc/generate.hpp"
#include "pmc/montecarlo.hpp"
#include "report.hpp"

namespace {

using namespace pmc;
using tools::Table;

constexpr int kExitBase = 10;

// "a,b,c" -> {a,b,c}
std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(csv::to_double(item, 0));
    } catch (const Error&) {
      fail(ErrorCode::InvalidArgument, std::string(what) + ": '" + item + "' is not a number");
    }
  }
  require(!out.empty(), ErrorCode::InvalidArgument, std::string(what) + " is empty");
  return out;
}

// "c11,c21,...;c12,c22,..." -> matrix whose columns are the ';' groups.
Matrix parse_columns(const std::string& text, const char* what) {
  std::vector<std::vector<double>> cols;
  std::stringstream ss(text);
  std::string group;
  while (std::getline(ss, group, ';')) cols.push_back(parse_list(group, what));
  require(!cols.empty(), ErrorCode::InvalidArgument, std::string(what) + " is empty");
  const auto rows = static_cast<Eigen::Index>(cols.front().size());
  Matrix m(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    require(static_cast<Eigen::Index>(cols[j].size()) == rows, ErrorCode::InvalidArgument,
            std::string(what) + ": every column needs " + std::to_string(rows) + " entries");
    for (Eigen::Index i = 0; i < rows; ++i) m(i, static_cast<Eigen::Index>(j)) = cols[j][static_cast<std::size_t>(i)];
  }
  return m;
}

std::vector<int> parse_blocks(const std::string& text, int m1) {
  if (text.empty()) return std::vector<int>(static_cast<std::size_t>(m1), 1);
  std::vector<int> out;
  int total = 0;
  for (double v : parse_list(text, "--blocks")) {
    require(v >= 1 && v == std::floor(v), ErrorCode::InvalidArgument, "--blocks entries must be positive integers");
    out.push_back(static_cast<int>(v));
    total += out.back();
  }
  require(total == m1, ErrorCode::InvalidArgument,
          "--blocks must sum to --m1 (" + std::to_string(total) + " vs " + std::to_string(m1) + ")");
  return out;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    csv::write_file(path, content);
  }
}

// Options shared by every command that fits a model.
struct FitFlags {
  std::string input;
  int period = 4;
  int p = 1;
  int m1 = 0;
  std::string blocks;
  int restarts = 20;
  std::uint64_t seed = 1;
  bool no_center = false;
  std::string objective = "rss";

  void attach(CLI::App& cmd) {
    cmd.add_option("--input", input, "series CSV (time_index,value or year,season,value)");
    cmd.add_option("--period", period, "number of seasons d")->check(CLI::PositiveNumber);
    cmd.add_option("--p", p, "autoregressive order")->check(CLI::NonNegativeNumber);
    cmd.add_option("--m1", m1, "number of unit roots (0 fits an unrestricted PAR)")->check(CLI::NonNegativeNumber);
    cmd.add_option("--blocks", blocks, "Jordan block sizes, e.g. 1,1 or 2 (default all 1)");
    cmd.add_option("--restarts", restarts, "random restarts of the seed search")->check(CLI::NonNegativeNumber);
    cmd.add_option("--seed", seed, "seed for the restart generator");
    cmd.add_flag("--no-center", no_center, "do not subtract the sample mean before fitting");
    cmd.add_option("--objective", objective, "seed search criterion")
        ->check(CLI::IsMember({"rss", "likelihood"}));
  }

  [[nodiscard]] FitOptions options() const {
    FitOptions o;
    o.center = !no_center;
    o.restarts = restarts;
    o.seed = seed;
    o.objective = objective == "likelihood" ? SeedObjective::SeasonalLikelihood : SeedObjective::ResidualSumOfSquares;
    return o;
  }

  [[nodiscard]] PeriodicSeries series(bool log_scale = false) const {
    require(!input.empty(), ErrorCode::InvalidArgument, "--input is required");
    PeriodicSeries x = csv::read_series(input, period);
    if (!log_scale) return x;
    std::vector<double> v;
    for (double a : x.data()) {
      require(a > 0.0, ErrorCode::InvalidArgument, "--log needs strictly positive data");
      v.push_back(std::log(a));
    }
    return {std::move(v), x.period(), x.origin()};
  }

  [[nodiscard]] FittedModel fit(const PeriodicSeries& x) const {
    if (m1 == 0) {
      require(blocks.empty(), ErrorCode::InvalidArgument, "--blocks needs --m1 > 0");
      return fit_par(x, p, options());
    }
    return fit_piar(x, p, parse_blocks(blocks, m1), options());
  }
};

std::string summary_lines(const FittedModel& m) {
  std::ostringstream os;
  os << "aic " << csv::sig6(aic(m)) << "\n";
  os << "bic " << csv::sig6(bic(m)) << "\n";
  os << "loglik " << csv::sig6(m.loglik) << "\n";
  os << "observations " << m.n_used << "\n";
  if (m.seeds.cols() == 1) {
    os << "prod alpha " << csv::sig6(m.pi_filter.coeffs().col(0).prod()) << "\n";
  } else if (m.seeds.cols() == 2) {
    try {
      const Cascade c = cascade(m.seeds, m.blocks == std::vector<int>{2});
      os << "prod alpha " << csv::sig6(c.alpha.coeffs().col(0).prod()) << "\n";
      os << "prod beta " << csv::sig6(c.beta.coeffs().col(0).prod()) << "\n";
    } catch (const Error&) {
    }
  }
  return os.str();
}

// ---- simulate -------------------------------------------------------------

struct SimulateCmd {
  std::string model;
  std::string seeds;
  std::string blocks;
  std::string sigma2;
  std::string psi;
  std::size_t n = 240;
  std::uint64_t seed = 1;
  std::size_t burn_in = 100;
  std::string output;

  void attach(CLI::App& cmd) {
    cmd.add_option("--model", model, "built-in model table2:I, table2:II or table2:III");
    cmd.add_option("--seeds", seeds, "unit-root seed vectors, columns separated by ';'");
    cmd.add_option("--blocks", blocks, "Jordan block sizes for --seeds (default all 1)");
    cmd.add_option("--sigma2", sigma2, "innovation variance per season");
    cmd.add_option("--psi", psi, "stationary AR coefficients, one ';' group per lag");
    cmd.add_option("--n", n, "series length")->check(CLI::PositiveNumber);
    cmd.add_option("--seed", seed, "random seed");
    cmd.add_option("--burn-in", burn_in, "burn-in of the stationary part");
    cmd.add_option("--output", output, "output CSV (default stdout)");
  }

  int run() const {
    SimConfig config;
    if (!model.empty()) {
      require(seeds.empty() && blocks.empty(), ErrorCode::InvalidArgument, "--model and --seeds are exclusive");
      const auto builtin = builtin_model(model);
      require(builtin.has_value(), ErrorCode::InvalidArgument, "unknown model '" + model + "'");
      config.spec = builtin->spec;
      config.noise = builtin->noise;
      if (!sigma2.empty()) {
        const std::vector<double> s2 = parse_list(sigma2, "--sigma2");
        config.noise = NoiseSpec(Eigen::Map<const Vector>(s2.data(), static_cast<Eigen::Index>(s2.size())));
      }
    } else {
      require(!sigma2.empty(), ErrorCode::InvalidArgument, "--sigma2 is required without --model");
      const std::vector<double> s2 = parse_list(sigma2, "--sigma2");
      const auto d = static_cast<int>(s2.size());
      config.noise = NoiseSpec(Eigen::Map<const Vector>(s2.data(), d));
      if (seeds.empty()) {
        config.spec = EigenSpec{d, d, {}, Matrix(d, 0), {}};
      } else {
        Matrix c = parse_columns(seeds, "--seeds");
        require(c.rows() == d, ErrorCode::DimensionMismatch, "--seeds columns need one entry per season");
        const auto m1 = static_cast<int>(c.cols());
        config.spec = EigenSpec{d, d, parse_blocks(blocks, m1), std::move(c), {}};
      }
    }
    require(std::holds_alternative<EigenSpec>(config.spec), ErrorCode::InvalidArgument, "internal: missing spec");
    const int d = config.noise.period();
    require(std::get<EigenSpec>(config.spec).d == d, ErrorCode::PeriodMismatch, "--sigma2 length must equal d");
    if (!psi.empty()) {
      Matrix phi = parse_columns(psi, "--psi");
      require(phi.rows() == d, ErrorCode::DimensionMismatch, "--psi groups need one entry per season");
      config.stationary_part = PeriodicFilter(std::move(phi));
    }
    config.n = n;
    config.burn_in = burn_in;
    config.rng_seed = seed;
    emit(output, csv::series_csv(simulate_piar(config)));
    return 0;
  }
};

// ---- fit ------------------------------------------------------------------

struct FitCmd {
  FitFlags flags;
  std::string prefix = "fit";

  void attach(CLI::App& cmd) {
    flags.attach(cmd);
    cmd.add_option("--output-prefix", prefix, "writes <prefix>_params.csv, <prefix>_params.txt, <prefix>_model.json");
  }

  int run() const {
    const FittedModel m = flags.fit(flags.series());
    const Table t = tools::parameter_table(m);
    const std::string text = t.to_text() + "\n" + summary_lines(m);
    csv::write_file(prefix + "_params.csv", t.to_csv());
    csv::write_file(prefix + "_params.txt", text);
    tools::write_model(prefix + "_model.json", m);
    std::cout << text;
    return 0;
  }
};

// ---- forecast -------------------------------------------------------------

struct ForecastCmd {
  FitFlags flags;
  std::string model_path;
  int horizon = 1;
  long steps = -1;
  double level = 0.95;
  std::string method = "vs";
  bool log_scale = false;
  std::string holdout;
  std::string output;
  std::string plot_output;

  void attach(CLI::App& cmd) {
    flags.attach(cmd);
    cmd.add_option("--model", model_path, "model JSON written by fit (otherwise the model is fitted)");
    cmd.add_option("--horizon", horizon, "forecast horizon in years")->check(CLI::PositiveNumber);
    cmd.add_option("--steps", steps, "keep only the first n forecast steps")->check(CLI::PositiveNumber);
    cmd.add_option("--level", level, "interval coverage");
    cmd.add_option("--method", method, "vs (vector of seasons) or mc (multi-companion)")
        ->check(CLI::IsMember({"vs", "mc"}));
    cmd.add_flag("--log", log_scale, "model the log series; adds back-transformed columns");
    cmd.add_option("--holdout", holdout, "observed continuation for MAPE/RMSE");
    cmd.add_option("--output", output, "forecast CSV (default stdout)");
    cmd.add_option("--plot-output", plot_output, "plot data CSV: history and forecast ribbon");
  }

  int run() const {
    const PeriodicSeries x = flags.series(log_scale);
    const FittedModel m = model_path.empty() ? flags.fit(x) : tools::read_model(model_path);
    int years = horizon;
    if (steps > 0) years = std::max<int>(years, static_cast<int>((steps + m.period - 1) / m.period));
    const ForecastResult r = method == "vs" ? forecast_vs(m, x, years, level) : forecast_mc(m, x, years, level);
    const auto points = chronological(r, steps);
    const auto back = exponentiate(points);

    std::ostringstream os;
    csv::Writer w(os);
    std::vector<std::string> head{"time", "year", "season", "point", "lower", "upper"};
    if (log_scale) head.insert(head.end(), {"point_exp", "lower_exp", "upper_exp"});
    w.row(head);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const ForecastPoint& f = points[i];
      std::vector<std::string> row{std::to_string(f.time), std::to_string(year_of(f.time, m.period)),
                                   std::to_string(f.season), csv::exact(f.point), csv::exact(f.lower),
                                   csv::exact(f.upper)};
      if (log_scale) {
        row.insert(row.end(), {csv::exact(back[i].point), csv::exact(back[i].lower), csv::exact(back[i].upper)});
      }
      w.row(row);
    }
    emit(output, os.str());

    if (!plot_output.empty()) {
      std::ostringstream ps;
      csv::Writer pw(ps);
      pw.row({"time", "kind", "value", "lower", "upper"});
      const PeriodicSeries raw = flags.series();
      for (std::size_t i = 0; i < raw.size(); ++i) {
        pw.row({std::to_string(raw.time_at(i)), "observed", csv::exact(raw[i]), "", ""});
      }
      for (const ForecastPoint& f : log_scale ? back : points) {
        pw.row({std::to_string(f.time), "forecast", csv::exact(f.point), csv::exact(f.lower), csv::exact(f.upper)});
      }
      csv::write_file(plot_output, ps.str());
    }

    if (!holdout.empty()) {
      const PeriodicSeries h = csv::read_series(holdout, m.period);
      const FitMetrics fm = fit_metrics(m, h, r, log_scale);
      Table t;
      t.label_heading = "horizon";
      t.columns = {"MAPE", "RMSE"};
      for (std::size_t i = 0; i < fm.mape.size(); ++i) {
        t.rows.push_back({std::to_string(i + 1), {fm.mape[i], fm.rmse[i]}});
      }
      std::cerr << t.to_text();
    }
    return 0;
  }
};

// ---- diagnose -------------------------------------------------------------

struct DiagnoseCmd {
  FitFlags flags;
  int max_lag = 8;
  std::string prefix = "diagnose";

  void attach(CLI::App& cmd) {
    flags.attach(cmd);
    cmd.add_option("--max-lag", max_lag, "largest residual autocorrelation lag")->check(CLI::PositiveNumber);
    cmd.add_option("--output-prefix", prefix,
                   "writes <prefix>_acf.csv, <prefix>_mcleod.csv, <prefix>_qq.csv, <prefix>_report.txt");
  }

  int run() const {
    const PeriodicSeries x = flags.series();
    const FittedModel m = flags.fit(x);
    const PeriodicSeries e = residuals(m, x);
    const PeriodicACF acf = periodic_acf(e, max_lag);

    std::ostringstream as;
    csv::Writer aw(as);
    aw.row({"season", "lag", "rho", "lower_bound", "upper_bound"});
    for (int s = 0; s < acf.period(); ++s) {
      for (int l = 0; l < acf.max_lag(); ++l) {
        aw.row({std::to_string(s + 1), std::to_string(l + 1), csv::exact(acf.rho(s, l)), csv::exact(-acf.bound),
                csv::exact(acf.bound)});
      }
    }
    csv::write_file(prefix + "_acf.csv", as.str());

    const Table mcleod = tools::mcleod_table(mcleod_stat(acf, m.order));
    csv::write_file(prefix + "_mcleod.csv", mcleod.to_csv());

    const NormalitySummary ns = normality_summary(e);
    std::ostringstream qs;
    csv::Writer qw(qs);
    qw.row({"theoretical", "sample"});
    for (std::size_t i = 0; i < ns.sample.size(); ++i) qw.row({csv::exact(ns.theoretical[i]), csv::exact(ns.sample[i])});
    csv::write_file(prefix + "_qq.csv", qs.str());

    std::ostringstream rep;
    rep << "residual autocorrelations (bound +-" << csv::sig6(acf.bound) << ")\n";
    Table acf_table;
    acf_table.label_heading = "season";
    for (int l = 1; l <= acf.max_lag(); ++l) acf_table.columns.push_back("lag " + std::to_string(l));
    for (int s = 0; s < acf.period(); ++s) {
      std::vector<double> row;
      for (int l = 0; l < acf.max_lag(); ++l) row.push_back(acf.rho(s, l));
      acf_table.rows.push_back({std::to_string(s + 1), row});
    }
    rep << acf_table.to_text() << "\n";
    rep << "McLeod portmanteau, df " << acf.max_lag() - m.order << "\n" << mcleod.to_text() << "\n";
    rep << "skewness " << csv::sig6(ns.skewness) << "\n";
    rep << "excess kurtosis " << csv::sig6(ns.kurtosis) << "\n";
    if (flags.m1 > 0) {
      const TestReport lr = lr_unit_root_test(x, flags.p, parse_blocks(flags.blocks, flags.m1), flags.options());
      rep << "\n" << lr.name << " " << csv::sig6(lr.statistic) << "\n";
      if (lr.companion) rep << "Q_LR diagonal " << csv::sig6(*lr.companion) << "\n";
      rep << "critical value 5% " << csv::sig6(lr.critical_value) << " (" << lr.source << ")\n";
      rep << "decision " << (lr.reject ? "reject unit-root restrictions" : "do not reject unit-root restrictions")
          << "\n";
    }
    csv::write_file(prefix + "_report.txt", rep.str());
    std::cout << rep.str();
    return 0;
  }
};

// ---- mc-experiment --------------------------------------------------------

struct McCmd {
  std::string model = "table2:I";
  std::size_t reps = 200;
  std::size_t n = 240;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  int restarts = 20;
  std::string output;
  std::string draws;

  void attach(CLI::App& cmd) {
    cmd.add_option("--model", model, "table2:I, table2:II or table2:III");
    cmd.add_option("--reps", reps, "replications")->check(CLI::PositiveNumber);
    cmd.add_option("--n", n, "series length")->check(CLI::PositiveNumber);
    cmd.add_option("--seed", seed, "master seed");
    cmd.add_option("--threads", threads, "worker threads (default PMC_THREADS or all cores)");
    cmd.add_option("--restarts", restarts, "random restarts per fit")->check(CLI::NonNegativeNumber);
    cmd.add_option("--output", output, "summary CSV (default stdout)");
    cmd.add_option("--draws", draws, "per-replication estimates CSV");
  }

  int run() const {
    const auto builtin = builtin_model(model);
    require(builtin.has_value(), ErrorCode::InvalidArgument, "unknown model '" + model + "'");
    McConfig config{*builtin};
    config.n = n;
    config.replications = reps;
    config.seed = seed;
    config.threads = threads;
    config.fit.restarts = restarts;
    const McResult r = run_monte_carlo(config);
    const Table t = tools::monte_carlo_table(r);
    emit(output, t.to_csv());
    if (!draws.empty()) {
      std::ostringstream os;
      csv::Writer w(os);
      std::vector<std::string> head;
      for (const ParameterSummary& p : r.parameters) head.push_back(p.name);
      w.row(head);
      for (const auto& d : r.draws) {
        std::vector<std::string> row;
        for (double v : d) row.push_back(csv::exact(v));
        w.row(row);
      }
      csv::write_file(draws, os.str());
    }
    if (!output.empty()) std::cout << t.to_text();
    std::cerr << "replications " << reps << ", failed fits " << r.failures << "\n";
    return 0;
  }
};

int report(ErrorCode code, const std::string& message) {
  std::cerr << "error: code=" << to_string(code) << " message=" << message << "\n";
  return kExitBase + static_cast<int>(code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic autoregression with periodic unit roots"};
  app.set_config("--config", "", "TOML or INI file; command-line flags take precedence");
  app.require_subcommand(1);

  SimulateCmd simulate;
  FitCmd fit;
  ForecastCmd forecast;
  DiagnoseCmd diagnose;
  McCmd mc;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "simulate a PIAR series");
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a PAR or PIAR model");
  CLI::App* fc_cmd = app.add_subcommand("forecast", "point and interval forecasts");
  CLI::App* diag_cmd = app.add_subcommand("diagnose", "residual diagnostics and the unit-root LR test");
  CLI::App* mc_cmd = app.add_subcommand("mc-experiment", "Monte Carlo study of PIAR estimation");
  simulate.attach(*sim_cmd);
  fit.attach(*fit_cmd);
  forecast.attach(*fc_cmd);
  diagnose.attach(*diag_cmd);
  mc.attach(*mc_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    return report(ErrorCode::FileNotFound, e.what());
  } catch (const CLI::ParseError& e) {
    return report(ErrorCode::InvalidArgument, e.what());
  }

  try {
    if (sim_cmd->parsed()) return simulate.run();
    if (fit_cmd->parsed()) return fit.run();
    if (fc_cmd->parsed()) return forecast.run();
    if (diag_cmd->parsed()) return diagnose.run();
    if (mc_cmd->parsed()) return mc.run();
  } catch (const Error& e) {
    return report(e.code(), e.what());
  } catch (const std::exception& e) {
    return report(ErrorCode::InvalidArgument, e.what());
  }
  return 0;
}
