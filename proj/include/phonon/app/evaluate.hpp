#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "phonon/app/config.hpp"
#include "phonon/lindblad.hpp"
#include "phonon/report.hpp"

namespace phonon::app {

struct Point {
  double cooperativity = 0.0;
  double n_th = 0.0;
  std::optional<ReducedParams> reduced;  ///< set when derived from laboratory parameters
};

struct Outcome {
  Point point;
  ModelKind model = ModelKind::Auto;  ///< after resolving auto
  std::optional<SteadyStateReport> report;
  std::string error;
  int exit_code = 0;
};

/// Exit code for an exception escaping a computation: 1 for bad input,
/// 2 for numerical non-convergence.
int exit_code_for(const std::exception& e);

/// n_th-major grid, or one point per pump rate when laboratory parameters are set.
std::vector<Point> grid_points(const RunConfig& config);

ModelSpec oracle_model(ModelKind kind, const Point& p, const OracleSettings& settings);
TruncationSpec oracle_truncation(ModelKind kind, const OracleSettings& settings);

/// Throws on failure.
SteadyStateReport evaluate(ModelKind kind, const Point& p, const OracleSettings& settings);

Outcome evaluate_safely(ModelKind kind, const Point& p, const OracleSettings& settings);

/// Calls f(i) for i in [0, n) on up to `jobs` threads.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& f) {
  const std::size_t workers = std::min<std::size_t>(n, jobs < 1 ? 1 : static_cast<std::size_t>(jobs));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Results in input order.
std::vector<Outcome> evaluate_all(ModelKind kind, const std::vector<Point>& points,
                                  const OracleSettings& settings, int jobs);

}  // namespace phonon::app
