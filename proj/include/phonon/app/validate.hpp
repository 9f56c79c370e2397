#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phonon/app/output.hpp"

namespace phonon::app {

/// |value - reference| / |reference|, or |value| when the reference is 0.
double relative_deviation(double value, double reference);

/// Sum of |p - q| with the shorter vector padded by zeros.
double l1_distance(const std::vector<double>& p, const std::vector<double>& q);

enum class PointStatus { Ok, Exceeded, Skipped, Failed };

std::string_view to_string(PointStatus s);

struct ValidationRow {
  Point point;
  PointStatus status = PointStatus::Ok;
  std::optional<double> n_ss_reference, n_ss_candidate;
  std::optional<double> g2_reference, g2_candidate;
  std::optional<double> dev_n_ss, dev_g2, populations_l1;
  std::string message;
};

struct ValidationSummary {
  ModelKind reference = ModelKind::Exact;
  ModelKind candidate = ModelKind::OracleReduced;
  double tolerance = 0.0;
  std::vector<ValidationRow> rows;
  double max_dev_n_ss = 0.0, median_dev_n_ss = 0.0;
  double max_dev_g2 = 0.0, median_dev_g2 = 0.0;
  double max_l1 = 0.0;
  int skipped = 0;
  int failed = 0;
  bool passed = false;
};

/// n_th in {0, 0.5, 1, 3, 5} x C in {0.1, 1, 3, 11, 50}.
std::vector<Point> default_validation_grid();

/// Compares config.candidate against config.reference on the configured
/// grid (default_validation_grid when no C or n_th values are given).
/// BudgetExceeded marks a point skipped; other failures mark it failed.
/// passed means no failed or exceeded points. Throws ConfigError on an
/// empty grid.
ValidationSummary run_validation(const RunConfig& config);

nlohmann::json to_json(const ValidationSummary& summary);
Table to_table(const ValidationSummary& summary);

}  // namespace phonon::app
