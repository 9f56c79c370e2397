// Acceptance criteria, one PASS/FAIL line each.
//   acceptance            run all
//   acceptance 3 7        run the listed criteria

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "phonon/app/figures.hpp"
#include "phonon/app/output.hpp"
#include "phonon/app/validate.hpp"
#include "phonon/lindblad.hpp"
#include "phonon/steady_exact.hpp"
#include "phonon/steady_hitemp.hpp"

using namespace phonon;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Result()> run;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

constexpr double kPi = std::numbers::pi;
const double kGridN[] = {0.0, 0.5, 1.0, 3.0, 5.0};
const double kGridC[] = {0.1, 1.0, 3.0, 11.0, 50.0};

SteadyStateReport converged_reduced(double c, double n) {
  return converge_truncation(ReducedModel{c, n}, {8, 1}).report;
}

Result oracle_equivalence() {
  double worst_n = 0.0, worst_g2 = 0.0;
  int largest = 0;
  for (double n : kGridN) {
    for (double c : kGridC) {
      const auto oracle = converged_reduced(c, n);
      largest = std::max(largest, oracle.diagnostics.dim_mech);
      worst_n = std::max(worst_n, app::relative_deviation(oracle.n_ss, mean_phonon_exact(c, n)));
      if (n > 0.0) worst_g2 = std::max(worst_g2, app::relative_deviation(*oracle.g2, *g2_exact(c, n)));
    }
  }
  return {worst_n <= 1e-6 && worst_g2 <= 1e-6,
          fmt("max rel dev n_ss %.2e, g2 %.2e (largest N_b %d)", worst_n, worst_g2, largest)};
}

Result coherent_point() {
  double worst_g2 = 0.0, worst_n = 0.0;
  for (double n : {0.1, 1.0, 5.0, 20.0, 40.0}) {
    const double c = 2.0 * n + 1.0;
    worst_g2 = std::max(worst_g2, std::abs(*g2_exact(c, n) - 1.0));
    worst_n = std::max(worst_n, std::abs(mean_phonon_exact(c, n) - n / c));
  }
  const auto oracle = converged_reduced(41.0, 20.0);
  const double og2 = std::abs(*oracle.g2 - 1.0);
  const double on = std::abs(oracle.n_ss - 20.0 / 41.0);
  return {worst_g2 <= 1e-9 && worst_n <= 1e-9 && og2 <= 1e-6 && on <= 1e-6,
          fmt("series |g2-1| %.1e, |n-n/(2n+1)| %.1e; oracle at n_th=20: %.1e, %.1e", worst_g2, worst_n, og2, on)};
}

Result regime_boundary() {
  int exceptions = 0, points = 0;
  for (int i = 0; i < 40; ++i) {
    const double c = 0.1 * std::pow(1e4, i / 39.0);
    for (int j = 0; j < 40; ++j) {
      const double n = 0.1 * std::pow(400.0, j / 39.0);
      const double g2 = *g2_exact(c, n);
      const double boundary = 2.0 * n + 1.0 - c;
      ++points;
      if ((g2 > 1.0) != (boundary > 0.0) || (g2 < 1.0) != (boundary < 0.0)) ++exceptions;
    }
  }
  return {exceptions == 0, fmt("%d exceptions on %d points", exceptions, points)};
}

Result endpoints() {
  const double g2 = *g2_exact(1e-4, 5.0);
  const double n = mean_phonon_exact(1e-4, 5.0);
  double worst_p0 = 1.0;
  for (double c : {1.0, 10.0}) worst_p0 = std::min(worst_p0, converged_reduced(c, 0.0).populations[0]);
  return {std::abs(g2 / 2.0 - 1.0) <= 0.01 && std::abs(n / 5.0 - 1.0) <= 0.01 && worst_p0 >= 1.0 - 1e-10,
          fmt("g2(1e-4, 5) = %.6f, n_ss = %.6f, oracle P(0) >= 1 - %.1e", g2, n, 1.0 - worst_p0)};
}

Result hitemp_limits() {
  const double large = g2_hitemp(1e6, 1e4);
  const double small = g2_hitemp(1e-2, 1e4);
  const double mean = mean_phonon_hitemp(1e3, 1e4);
  const double asym = std::sqrt(1e4 / (kPi * 1e3));
  const bool a = std::abs(large - kPi / 2.0) <= 1e-3;
  const bool b = std::abs(small - 2.0) <= 1e-2;
  const bool c = std::abs(mean / asym - 1.0) <= 0.01;
  return {a && b && c, fmt("g2(1e6, 1e4) = %.6f [%s]; g2(1e-2, 1e4) = %.6f [%s]; n_ss(1e3, 1e4)/sqrt(n/piC) = %.6f [%s]",
                           large, a ? "ok" : "off", small, b ? "ok" : "off", mean / asym, c ? "ok" : "off")};
}

Result cross_regime() {
  const auto dev_g2 = [](double n) { return app::relative_deviation(g2_hitemp(1.0, n), *g2_exact(1.0, n)); };
  const double d2 = dev_g2(1e2), d3 = dev_g2(1e3);
  const double dn = app::relative_deviation(mean_phonon_hitemp(1.0, 1e3), mean_phonon_exact(1.0, 1e3));
  return {d3 < d2 && dn <= 0.05 && d3 <= 0.05,
          fmt("g2 dev %.3e (n_th=1e2) -> %.3e (1e3); n_ss dev at 1e3 %.3e", d2, d3, dn)};
}

SteadyStateReport rwa_point(double kappa) {
  const double g = coupling_for_cooperativity(3.0, kappa, 1.0);
  return solve_model(RwaModel{g, kappa, 1.0, 1.0}, {30, 4});
}

Result adiabatic_elimination() {
  const double n_ref = mean_phonon_exact(3.0, 1.0), g2_ref = *g2_exact(3.0, 1.0);
  const auto r200 = rwa_point(200.0), r400 = rwa_point(400.0);
  const double n200 = app::relative_deviation(r200.n_ss, n_ref), n400 = app::relative_deviation(r400.n_ss, n_ref);
  const double g200 = app::relative_deviation(*r200.g2, g2_ref), g400 = app::relative_deviation(*r400.g2, g2_ref);
  return {n400 <= 0.05 && g400 <= 0.05 && n400 < n200 && g400 < g200,
          fmt("vs reduced C=3: n_ss dev %.3f -> %.3f, g2 dev %.3f -> %.3f (kappa 200 -> 400; n_ss %.5f, %.5f)", n200,
              n400, g200, g400, r200.n_ss, r400.n_ss)};
}

Result rwa_validity() {
  const double kappa = 400.0, omega = 50.0 * kappa;
  const auto reduced = reduced_from_cooperativity(3.0, 1.0, kappa, 1.0, omega, 1.0);
  const double squeeze = reduced.g0() * reduced.n_c / omega;
  const TruncationSpec trunc{30, 4};
  const auto rwa = solve_model(RwaModel{reduced.g, kappa, 1.0, 1.0}, trunc);
  const auto off = solve_model(PreRwaModel{reduced, kappa, 1.0, 1.0, false}, trunc);
  const auto on = solve_model(PreRwaModel{reduced, kappa, 1.0, 1.0, true}, trunc);
  const double dev = app::relative_deviation(off.n_ss, rwa.n_ss);
  const double shift = app::relative_deviation(on.n_ss, off.n_ss);
  return {squeeze <= 1e-3 && dev <= 0.10 && shift <= 0.01,
          fmt("g0 n_c/omega' = %.1e; pre-RWA vs RWA n_ss dev %.2e; quadratic term shift %.2e", squeeze, dev, shift)};
}

Result population_integrity() {
  double worst_sum = 0.0, worst_neg = 0.0, worst_m1 = 0.0, worst_m2 = 0.0;
  for (double n : kGridN) {
    if (n == 0.0) continue;
    for (double c : kGridC) {
      const auto r = exact_report(c, n);
      double sum = 0.0, m1 = 0.0, m2 = 0.0;
      for (std::size_t m = 0; m < r.populations.size(); ++m) {
        const double p = r.populations[m];
        worst_neg = std::min(worst_neg, p);
        sum += p;
        m1 += m * p;
        m2 += m * (m - 1.0) * p;
      }
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
      worst_m1 = std::max(worst_m1, app::relative_deviation(m1, r.n_ss));
      worst_m2 = std::max(worst_m2, app::relative_deviation(m2, *r.g2 * r.n_ss * r.n_ss));
    }
  }
  return {worst_sum <= 1e-8 && worst_neg >= -1e-12 && worst_m1 <= 1e-5 && worst_m2 <= 1e-5,
          fmt("|sum-1| %.1e, min P %.1e, moment devs %.1e, %.1e", worst_sum, worst_neg, worst_m1, worst_m2)};
}

// Reads back the CSV exactly as the CLI writes it.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    std::fprintf(stderr, "missing column %s\n", name.c_str());
    std::exit(2);
  }
};

Csv figure_csv(int id) {
  std::ostringstream out;
  app::write_csv(out, app::figure_table(id));
  std::istringstream in(out.str());
  Csv csv;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (first) {
      csv.header = fields;
      first = false;
      continue;
    }
    std::vector<double> row;
    for (const auto& v : fields) row.push_back(v == "null" ? std::nan("") : std::stod(v));
    csv.rows.push_back(row);
  }
  return csv;
}

Result figure_properties() {
  std::vector<std::string> problems;

  const auto f1 = figure_csv(1);
  const auto c1 = f1.col("C"), n1 = f1.col("n_th"), y1 = f1.col("n_ss");
  for (std::size_t i = 0; i < f1.rows.size(); ++i) {
    const auto& r = f1.rows[i];
    const bool first_of_curve = i == 0 || f1.rows[i - 1][n1] != r[n1];
    if (first_of_curve) {
      if (std::abs(r[y1] / r[n1] - 1.0) > 0.01) problems.push_back(fmt("fig1 plateau %g at n_th %g", r[y1], r[n1]));
    } else if (!(r[y1] < f1.rows[i - 1][y1]) || !(r[c1] > f1.rows[i - 1][c1])) {
      problems.push_back(fmt("fig1 not decreasing at C %g n_th %g", r[c1], r[n1]));
    }
  }

  const auto f2 = figure_csv(2);
  const auto y2 = f2.col("g2");
  for (const auto& r : f2.rows) {
    if (!(r[y2] >= kPi / 2.0 - 0.01 && r[y2] <= 2.01)) problems.push_back(fmt("fig2 g2 %g", r[y2]));
  }

  const auto f6 = figure_csv(6);
  const auto k6 = f6.col("n"), p6 = f6.col("P_C41");
  double mean = 0.0, second = 0.0;
  for (const auto& r : f6.rows) {
    mean += r[k6] * r[p6];
    second += r[k6] * r[k6] * r[p6];
  }
  const double fano = (second - mean * mean) / mean;
  if (std::abs(fano - 1.0) > 1e-3) problems.push_back(fmt("fig6 Fano %g", fano));

  // g2 = 1 crossing on each n_th row must sit within one cell of C = 2n+1.
  const auto f5 = figure_csv(5);
  const auto c5 = f5.col("C"), n5 = f5.col("n_th"), g5 = f5.col("g2");
  int rows_checked = 0;
  for (std::size_t start = 0; start < f5.rows.size();) {
    std::size_t end = start;
    while (end < f5.rows.size() && f5.rows[end][n5] == f5.rows[start][n5]) ++end;
    const double target = 2.0 * f5.rows[start][n5] + 1.0;
    long crossing = -1, home = -1;
    int crossings = 0;
    for (std::size_t i = start; i + 1 < end; ++i) {
      if ((f5.rows[i][g5] - 1.0) * (f5.rows[i + 1][g5] - 1.0) <= 0.0) {
        crossing = static_cast<long>(i - start);
        ++crossings;
      }
      if (f5.rows[i][c5] <= target && target <= f5.rows[i + 1][c5]) home = static_cast<long>(i - start);
    }
    if (home >= 0 && (crossings != 1 || std::abs(crossing - home) > 1)) {
      problems.push_back(fmt("fig5 contour at n_th %g: cell %ld vs %ld", f5.rows[start][n5], crossing, home));
    }
    if (home >= 0) ++rows_checked;
    start = end;
  }

  std::string detail = fmt("fig1 %zu rows, fig2 %zu rows, fig6 Fano(C=41) %.6f, fig5 %d contour rows", f1.rows.size(),
                           f2.rows.size(), fano, rows_checked);
  for (std::size_t i = 0; i < std::min<std::size_t>(problems.size(), 3); ++i) detail += "; " + problems[i];
  return {problems.empty() && rows_checked > 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", 60.0, oracle_equivalence},
      {2, "coherent point", 10.0, coherent_point},
      {3, "regime boundary", 30.0, regime_boundary},
      {4, "thermal and ground-state endpoints", 10.0, endpoints},
      {5, "high-temperature limits", 1.0, hitemp_limits},
      {6, "cross-regime consistency", 60.0, cross_regime},
      {7, "adiabatic elimination", 300.0, adiabatic_elimination},
      {8, "RWA validity", 600.0, rwa_validity},
      {9, "population integrity", 30.0, population_integrity},
      {10, "figure data", 120.0, figure_properties},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (seconds > c.budget_seconds) {
      r.pass = false;
      r.detail += fmt("; over budget (%.0f s)", c.budget_seconds);
    }
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", r.pass ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str(),
                seconds);
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
