#include "phonon/app/figures.hpp"

#include <cmath>
#include <sstream>

#include "phonon/app/config.hpp"
#include "phonon/steady_exact.hpp"
#include "phonon/steady_hitemp.hpp"

namespace phonon::app {

namespace {

std::vector<double> log_grid(double lo, double hi, int steps) {
  std::ostringstream spec;
  spec.precision(17);
  spec << lo << ':' << hi << ':' << steps << ":log";
  return parse_range(spec.str());
}

std::vector<double> pick(const std::vector<double>& override_values, std::vector<double> fallback) {
  return override_values.empty() ? fallback : override_values;
}

Cell optional_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

struct Sample {
  double c, n;
  double n_ss = 0.0;
  std::optional<double> g2;
};

// n_th-major curve samples.
std::vector<Sample> curves(const std::vector<double>& nths, const std::vector<double>& cs, bool hitemp,
                           int jobs) {
  std::vector<Sample> s;
  for (double n : nths) {
    for (double c : cs) s.push_back({c, n, 0.0, std::nullopt});
  }
  parallel_for(s.size(), jobs, [&](std::size_t i) {
    if (hitemp) {
      s[i].n_ss = mean_phonon_hitemp(s[i].c, s[i].n);
      s[i].g2 = g2_hitemp(s[i].c, s[i].n);
    } else {
      s[i].n_ss = mean_phonon_exact(s[i].c, s[i].n);
      s[i].g2 = g2_exact(s[i].c, s[i].n);
    }
  });
  return s;
}

Table curve_table(const std::vector<Sample>& samples, bool with_n, bool with_g2) {
  Table t;
  t.columns = {"C", "n_th"};
  if (with_n) t.columns.push_back("n_ss");
  if (with_g2) t.columns.push_back("g2");
  for (const auto& s : samples) {
    std::vector<Cell> row{s.c, s.n};
    if (with_n) row.push_back(s.n_ss);
    if (with_g2) row.push_back(optional_cell(s.g2));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string column_label(double c) { return "P_C" + format_double(c); }

Table figure3(const FigureOverrides& o) {
  const double n = pick(o.nth_values, {1e4}).front();
  const double c = pick(o.c_values, {1e2}).front();
  const auto d = phonon_distribution_hitemp(c, n);
  const double mean = mean_phonon_hitemp(c, n);
  Table t;
  t.columns = {"n", "P", "P_thermal", "P_coherent"};
  for (std::size_t k = 0; k < d.populations.size(); ++k) {
    const double kd = static_cast<double>(k);
    const double thermal = std::exp(kd * std::log(mean / (mean + 1.0)) - std::log1p(mean));
    const double coherent = std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
    t.rows.push_back({static_cast<long long>(k), d.populations[k], thermal, coherent});
  }
  return t;
}

Table figure6(const FigureOverrides& o) {
  const double n = pick(o.nth_values, {20.0}).front();
  const auto cs = pick(o.c_values, {1.0, 41.0, 1000.0});
  constexpr int kLevels = 60;
  std::vector<std::vector<double>> columns(cs.size());
  parallel_for(cs.size(), o.jobs, [&](std::size_t i) { columns[i] = phonon_populations_exact(cs[i], n, kLevels); });
  Table t;
  t.columns = {"n"};
  for (double c : cs) t.columns.push_back(column_label(c));
  for (int k = 0; k <= kLevels; ++k) {
    std::vector<Cell> row{static_cast<long long>(k)};
    for (const auto& col : columns) row.push_back(col[k]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

Table figure_table(int id, const FigureOverrides& o) {
  const std::vector<double> hot{1e3, 1e4, 1e5, 1e6};
  switch (id) {
    case 1:
      return curve_table(curves(pick(o.nth_values, hot), pick(o.c_values, log_grid(1e-12, 1e4, 161)), true, o.jobs),
                         true, false);
    case 2:
      return curve_table(curves(pick(o.nth_values, hot), pick(o.c_values, log_grid(1e-12, 1e4, 161)), true, o.jobs),
                         false, true);
    case 3:
      return figure3(o);
    case 4:
      return curve_table(
          curves(pick(o.nth_values, {1.0, 10.0, 20.0, 40.0}), pick(o.c_values, log_grid(1e-2, 1e3, 101)), false, o.jobs),
          true, false);
    case 5:
      return curve_table(
          curves(pick(o.nth_values, log_grid(0.1, 40.0, 41)), pick(o.c_values, log_grid(0.1, 1e3, 41)), false, o.jobs),
          true, true);
    case 6:
      return figure6(o);
    default:
      throw ConfigError("figure id must be 1..6");
  }
}

std::string plot_script(int id, const std::string& csv_name) {
  std::ostringstream s;
  s << "import csv\n"
       "import matplotlib\n"
       "matplotlib.use(\"Agg\")\n"
       "import matplotlib.pyplot as plt\n\n"
    << "with open(\"" << csv_name << "\", newline=\"\") as f:\n"
    << "    rows = list(csv.DictReader(f))\n\n"
       "def num(v):\n"
       "    return float(\"nan\") if v == \"null\" else float(v)\n\n"
       "fig, ax = plt.subplots()\n";
  switch (id) {
    case 1:
    case 2:
    case 4: {
      const char* y = id == 2 ? "g2" : "n_ss";
      s << "for n in sorted({num(r[\"n_th\"]) for r in rows}):\n"
        << "    sel = [r for r in rows if num(r[\"n_th\"]) == n]\n"
        << "    ax.plot([num(r[\"C\"]) for r in sel], [num(r[\"" << y << "\"]) for r in sel], label=f\"n_th = {n:g}\")\n"
        << "ax.set_xscale(\"log\")\n";
      if (id != 2) s << "ax.set_yscale(\"log\")\n";
      s << "ax.set_xlabel(\"C\")\nax.set_ylabel(\"" << y << "\")\nax.legend()\n";
      break;
    }
    case 3:
      s << "n = [num(r[\"n\"]) for r in rows]\n"
           "for col, mark in ((\"P\", \"o\"), (\"P_thermal\", \"^\"), (\"P_coherent\", \"s\")):\n"
           "    ax.plot(n, [num(r[col]) for r in rows], mark, label=col)\n"
           "ax.set_xlabel(\"n\")\nax.set_ylabel(\"P(n)\")\nax.legend()\n";
      break;
    case 5:
      s << "cs = sorted({num(r[\"C\"]) for r in rows})\n"
           "ns = sorted({num(r[\"n_th\"]) for r in rows})\n"
           "g = {(num(r[\"C\"]), num(r[\"n_th\"])): num(r[\"g2\"]) for r in rows}\n"
           "z = [[g[(c, n)] for c in cs] for n in ns]\n"
           "m = ax.pcolormesh(cs, ns, z, shading=\"nearest\")\n"
           "ax.contour(cs, ns, z, levels=[0.4, 0.7, 1.0, 1.3, 1.6], colors=\"k\")\n"
           "ax.set_xscale(\"log\")\nax.set_yscale(\"log\")\n"
           "ax.set_xlabel(\"C\")\nax.set_ylabel(\"n_th\")\nfig.colorbar(m, label=\"g2\")\n";
      break;
    case 6:
      s << "n = [num(r[\"n\"]) for r in rows]\n"
           "for col in [k for k in rows[0] if k.startswith(\"P_C\")]:\n"
           "    ax.plot(n, [num(r[col]) for r in rows], \"o-\", label=col)\n"
           "ax.set_xlabel(\"n\")\nax.set_ylabel(\"P(n)\")\nax.legend()\n";
      break;
    default:
      throw ConfigError("figure id must be 1..6");
  }
  const auto stem = csv_name.substr(0, csv_name.rfind('.'));
  s << "fig.savefig(\"" << stem << ".png\", dpi=150)\n";
  return s.str();
}

}  // namespace phonon::app
