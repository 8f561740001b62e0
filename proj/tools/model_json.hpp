#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmc/csv.hpp"
#include "pmc/estimate.hpp"

// Fitted models as JSON: matrices are stored as arrays of rows.
namespace pmc::tools {

using nlohmann::json;

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& rows, Eigen::Index expected_rows, const char* what) {
  if (!rows.is_array()) fail(ErrorCode::ParseError, std::string(what) + " must be an array of rows");
  if (static_cast<Eigen::Index>(rows.size()) != expected_rows) {
    fail(ErrorCode::ParseError, std::string(what) + " must have one row per season");
  }
  const Eigen::Index cols = rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size());
  Matrix m(expected_rows, cols);
  for (Eigen::Index i = 0; i < expected_rows; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      fail(ErrorCode::ParseError, std::string(what) + " rows must have equal length");
    }
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

inline json model_to_json(const FittedModel& m) {
  json j;
  j["period"] = m.period;
  j["order"] = m.order;
  j["blocks"] = m.blocks;
  j["mean"] = m.mean;
  j["pi_filter"] = matrix_to_json(m.pi_filter.coeffs());
  j["stationary"] = matrix_to_json(m.stationary.phi());
  j["sigma2"] = std::vector<double>(m.sigma2.sigma2().data(), m.sigma2.sigma2().data() + m.sigma2.period());
  j["seeds"] = matrix_to_json(m.seeds);
  j["loglik"] = m.loglik;
  j["n_used"] = m.n_used;
  j["objective"] = m.objective;
  j["aic"] = aic(m);
  j["bic"] = bic(m);
  return j;
}

inline FittedModel model_from_json(const json& j) {
  try {
    const int d = j.at("period").get<int>();
    require(d >= 1, ErrorCode::ParseError, "model period must be >= 1");
    const std::vector<double> s2 = j.at("sigma2").get<std::vector<double>>();
    require(static_cast<int>(s2.size()) == d, ErrorCode::ParseError, "sigma2 must have one entry per season");
    Matrix pi = matrix_from_json(j.at("pi_filter"), d, "pi_filter");
    Matrix st = matrix_from_json(j.at("stationary"), d, "stationary");
    FittedModel m = model_from_parts(PeriodicFilter(std::move(pi)), PeriodicCoefficients(std::move(st)),
                                     NoiseSpec(Eigen::Map<const Vector>(s2.data(), d)),
                                     j.value("blocks", std::vector<int>{}), j.value("mean", 0.0));
    m.loglik = j.value("loglik", 0.0);
    m.n_used = j.value("n_used", std::size_t{0});
    m.objective = j.value("objective", 0.0);
    if (j.contains("seeds") && !j.at("seeds").empty()) m.seeds = matrix_from_json(j.at("seeds"), d, "seeds");
    return m;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid model JSON: ") + e.what());
  }
}

inline FittedModel read_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::FileNotFound, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, "'" + path + "' is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

inline void write_model(const std::string& path, const FittedModel& m) {
  csv::write_file(path, model_to_json(m).dump(2) + "\n");
}

}  // namespace pmc::tools
