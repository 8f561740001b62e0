#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pmc/csv.hpp"
#include "pmc/diagnostics.hpp"
#include "pmc/estimate.hpp"
#include "pmc/montecarlo.hpp"
#include "pmc/pifilter.hpp"

// Tables shared by the CLI: one labelled row per parameter, one column per
// season, rendered as CSV (full precision) or aligned text (6 digits).
namespace pmc::tools {

struct TableRow {
  std::string label;
  std::vector<double> values;
};

struct Table {
  std::vector<std::string> columns;  // excluding the label column
  std::string label_heading;
  std::vector<TableRow> rows;

  [[nodiscard]] std::string to_csv() const {
    std::ostringstream os;
    csv::Writer w(os);
    std::vector<std::string> head{label_heading};
    head.insert(head.end(), columns.begin(), columns.end());
    w.row(head);
    for (const TableRow& r : rows) {
      std::vector<std::string> fields{r.label};
      for (double v : r.values) fields.push_back(csv::exact(v));
      w.row(fields);
    }
    return os.str();
  }

  [[nodiscard]] std::string to_text() const {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> head{label_heading};
    head.insert(head.end(), columns.begin(), columns.end());
    cells.push_back(head);
    for (const TableRow& r : rows) {
      std::vector<std::string> line{r.label};
      for (double v : r.values) line.push_back(csv::sig6(v));
      cells.push_back(line);
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& line : cells) {
      for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    }
    std::ostringstream os;
    for (const auto& line : cells) {
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (i == 0) {
          os << line[i] << std::string(width[i] - line[i].size(), ' ');
        } else {
          os << "  " << std::string(width[i] - line[i].size(), ' ') << line[i];
        }
      }
      os << '\n';
    }
    return os.str();
  }
};

inline std::vector<std::string> season_columns(int d) {
  std::vector<std::string> out;
  for (int s = 1; s <= d; ++s) out.push_back("s=" + std::to_string(s));
  return out;
}

inline std::vector<double> column_values(const Matrix& m, Eigen::Index col) {
  std::vector<double> out;
  for (Eigen::Index s = 0; s < m.rows(); ++s) out.push_back(m(s, col));
  return out;
}

/// theta_i rows, alpha/beta (one or two unit roots), psi_i rows and sigma_s.
inline Table parameter_table(const FittedModel& m) {
  Table t;
  t.label_heading = "parameter";
  t.columns = season_columns(m.period);
  const Matrix& theta = m.pi_filter.coeffs();
  for (Eigen::Index i = 0; i < theta.cols(); ++i) {
    t.rows.push_back({"theta_" + std::to_string(i + 1), column_values(theta, i)});
  }
  if (theta.cols() == 1) {
    t.rows.push_back({"alpha", column_values(theta, 0)});
  } else if (theta.cols() == 2 && m.seeds.cols() == 2) {
    try {
      const bool chained = m.blocks == std::vector<int>{2};
      const Cascade c = cascade(m.seeds, chained);
      t.rows.push_back({"alpha", column_values(c.alpha.coeffs(), 0)});
      t.rows.push_back({"beta", column_values(c.beta.coeffs(), 0)});
    } catch (const Error&) {
      // A vanishing seed entry leaves the cascade undefined; theta rows remain.
    }
  }
  const Matrix& psi = m.stationary.phi();
  const bool pure_par = theta.cols() == 0;
  for (Eigen::Index i = 0; i < psi.cols(); ++i) {
    t.rows.push_back({(pure_par ? "phi_" : "psi_") + std::to_string(i + 1), column_values(psi, i)});
  }
  std::vector<double> sigma;
  for (Eigen::Index s = 0; s < m.sigma2.sigma2().size(); ++s) sigma.push_back(std::sqrt(m.sigma2.sigma2()(s)));
  t.rows.push_back({"sigma", sigma});
  return t;
}

/// Rows true / mean / sd / RMSE, one column per parameter.
inline Table monte_carlo_table(const McResult& r) {
  Table t;
  t.label_heading = "row";
  TableRow truth{"true", {}};
  TableRow mean{"mean", {}};
  TableRow sd{"sd", {}};
  TableRow rmse{"RMSE", {}};
  for (const ParameterSummary& p : r.parameters) {
    t.columns.push_back(p.name);
    truth.values.push_back(p.truth);
    mean.values.push_back(p.mean);
    sd.values.push_back(p.sd);
    rmse.values.push_back(p.rmse);
  }
  t.rows = {truth, mean, sd, rmse};
  return t;
}

inline Table mcleod_table(const std::vector<TestReport>& reports) {
  Table t;
  t.label_heading = "row";
  TableRow stat{"McLeod stat", {}};
  TableRow crit{"critical 5%", {}};
  TableRow reject{"reject", {}};
  for (std::size_t s = 0; s < reports.size(); ++s) {
    t.columns.push_back("s=" + std::to_string(s + 1));
    stat.values.push_back(reports[s].statistic);
    crit.values.push_back(reports[s].critical_value);
    reject.values.push_back(reports[s].reject ? 1.0 : 0.0);
  }
  t.rows = {stat, crit, reject};
  return t;
}

}  // namespace pmc::tools
