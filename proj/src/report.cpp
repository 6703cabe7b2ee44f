#include "cbound/report.hpp"

#include <cmath>

#include "cbound/errors.hpp"

namespace cbound {

using nlohmann::json;

json matrix_to_json(const ComplexMatrixd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrixd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("matrix_from_json: expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  ComplexMatrixd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw InvalidInput("matrix_from_json: ragged rows");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto& z = row.at(static_cast<std::size_t>(k));
      m(i, k) = {z.at(0).get<double>(), z.at(1).get<double>()};
    }
  }
  return m;
}

json bounds_to_json(const BoundReport& r, const InequalityFlags& flags) {
  return json{
      {"dim", r.dim},
      {"purity", r.purity},
      {"product", r.product},
      {"robertson", r.robertson},
      {"schrodinger", r.schrodinger},
      {"luo_park", r.luo_park},
      {"bound1", r.bound1},
      {"bound2", r.bound2},
      {"degenerate", r.degenerate},
      {"pass",
       {{"robertson", flags.robertson},
        {"schrodinger", flags.schrodinger},
        {"luo_park", flags.luo_park},
        {"bound1", flags.bound1},
        {"bound2", flags.bound2}}},
  };
}

json result_to_json(const OptimizationResult& r) {
  json spectrum = json::array();
  for (Eigen::Index i = 0; i < r.spectrum.size(); ++i) spectrum.push_back(r.spectrum(i));
  json diagnostics = r.diagnostics;
  return json{
      {"dim", r.dim},
      {"mode", to_string(r.mode)},
      {"spectrum", spectrum},
      {"achieved_ratio", r.achieved_ratio},
      {"conjectured_constant", r.conjectured_constant},
      {"loose_constant", r.loose_constant},
      {"relative_deviation", r.relative_deviation()},
      {"best_random_ratio", r.best_random_ratio},
      {"iterations", r.iterations},
      {"restarts_used", r.restarts_used},
      {"converged", r.converged},
      {"monotone", r.monotone},
      {"counterexample", r.is_counterexample()},
      {"diagnostics", diagnostics},
      {"witness_a", matrix_to_json(r.witness_a)},
      {"witness_b", matrix_to_json(r.witness_b)},
  };
}

json estimate_to_json(const MCEstimate& e, double target) {
  const double z = z_score(e, target);
  return json{
      {"mean", e.mean},
      {"std_error", e.std_error},
      {"samples", e.samples},
      {"target", target},
      // JSON has no infinity; a zero-variance mismatch is reported as null.
      {"z", std::isfinite(z) ? json(z) : json(nullptr)},
  };
}

}  // namespace cbound
