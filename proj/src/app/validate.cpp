#include "phonon/app/validate.hpp"

#include <algorithm>
#include <cmath>

#include "phonon/app/log.hpp"

namespace phonon::app {

using nlohmann::json;

double relative_deviation(double value, double reference) {
  const double diff = std::abs(value - reference);
  return reference == 0.0 ? diff : diff / std::abs(reference);
}

double l1_distance(const std::vector<double>& p, const std::vector<double>& q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < std::max(p.size(), q.size()); ++i) {
    sum += std::abs((i < p.size() ? p[i] : 0.0) - (i < q.size() ? q[i] : 0.0));
  }
  return sum;
}

std::string_view to_string(PointStatus s) {
  switch (s) {
    case PointStatus::Ok: return "ok";
    case PointStatus::Exceeded: return "exceeded";
    case PointStatus::Skipped: return "skipped";
    case PointStatus::Failed: return "failed";
  }
  return "?";
}

std::vector<Point> default_validation_grid() {
  std::vector<Point> grid;
  for (double n : {0.0, 0.5, 1.0, 3.0, 5.0}) {
    for (double c : {0.1, 1.0, 3.0, 11.0, 50.0}) grid.push_back({c, n, std::nullopt});
  }
  return grid;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Cell optional_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

}  // namespace

ValidationSummary run_validation(const RunConfig& config) {
  std::vector<Point> points;
  if (config.c_values.empty() && config.nth_values.empty() && !config.physical) {
    points = default_validation_grid();
  } else {
    points = grid_points(config);
  }
  if (points.empty()) throw ConfigError("validation grid is empty");

  ValidationSummary s;
  s.reference = config.reference;
  s.candidate = config.candidate;
  s.tolerance = config.tolerance;
  s.rows.resize(points.size());

  parallel_for(points.size(), config.jobs, [&](std::size_t i) {
    auto& row = s.rows[i];
    row.point = points[i];
    try {
      const auto ref = evaluate(config.reference, points[i], config.oracle);
      const auto cand = evaluate(config.candidate, points[i], config.oracle);
      row.n_ss_reference = ref.n_ss;
      row.n_ss_candidate = cand.n_ss;
      row.g2_reference = ref.g2;
      row.g2_candidate = cand.g2;
      row.dev_n_ss = relative_deviation(cand.n_ss, ref.n_ss);
      if (ref.g2 && cand.g2) row.dev_g2 = relative_deviation(*cand.g2, *ref.g2);
      row.populations_l1 = l1_distance(cand.populations, ref.populations);
      const bool within = *row.dev_n_ss <= config.tolerance && (!row.dev_g2 || *row.dev_g2 <= config.tolerance);
      row.status = within ? PointStatus::Ok : PointStatus::Exceeded;
    } catch (const BudgetExceeded& e) {
      row.status = PointStatus::Skipped;
      row.message = e.what();
    } catch (const std::exception& e) {
      row.status = PointStatus::Failed;
      row.message = e.what();
    }
    if (row.status != PointStatus::Ok) {
      logger().info("validate C={} n_th={}: {} {}", row.point.cooperativity, row.point.n_th, to_string(row.status),
                    row.message);
    }
  });

  std::vector<double> dn, dg;
  bool all_ok = true;
  for (const auto& row : s.rows) {
    if (row.status == PointStatus::Skipped) ++s.skipped;
    if (row.status == PointStatus::Failed) ++s.failed;
    if (row.status == PointStatus::Failed || row.status == PointStatus::Exceeded) all_ok = false;
    if (row.dev_n_ss) dn.push_back(*row.dev_n_ss);
    if (row.dev_g2) dg.push_back(*row.dev_g2);
    if (row.populations_l1) s.max_l1 = std::max(s.max_l1, *row.populations_l1);
  }
  s.max_dev_n_ss = dn.empty() ? 0.0 : *std::max_element(dn.begin(), dn.end());
  s.max_dev_g2 = dg.empty() ? 0.0 : *std::max_element(dg.begin(), dg.end());
  s.median_dev_n_ss = median(dn);
  s.median_dev_g2 = median(dg);
  s.passed = all_ok;
  return s;
}

json to_json(const ValidationSummary& s) {
  json j;
  j["reference"] = std::string(to_string(s.reference));
  j["candidate"] = std::string(to_string(s.candidate));
  j["tolerance"] = s.tolerance;
  j["passed"] = s.passed;
  j["summary"] = {{"points", s.rows.size()},
                  {"skipped", s.skipped},
                  {"failed", s.failed},
                  {"max_rel_dev_n_ss", s.max_dev_n_ss},
                  {"median_rel_dev_n_ss", s.median_dev_n_ss},
                  {"max_rel_dev_g2", s.max_dev_g2},
                  {"median_rel_dev_g2", s.median_dev_g2},
                  {"max_populations_l1", s.max_l1}};
  j["points"] = to_json(to_table(s));
  return j;
}

Table to_table(const ValidationSummary& s) {
  Table t;
  t.columns = {"C",          "n_th",         "status",       "n_ss_reference", "n_ss_candidate", "rel_dev_n_ss",
               "g2_reference", "g2_candidate", "rel_dev_g2", "populations_l1", "message"};
  for (const auto& r : s.rows) {
    t.rows.push_back({r.point.cooperativity, r.point.n_th, std::string(to_string(r.status)),
                      optional_cell(r.n_ss_reference), optional_cell(r.n_ss_candidate), optional_cell(r.dev_n_ss),
                      optional_cell(r.g2_reference), optional_cell(r.g2_candidate), optional_cell(r.dev_g2),
                      optional_cell(r.populations_l1), r.message});
  }
  return t;
}

}  // namespace phonon::app
