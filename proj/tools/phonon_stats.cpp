// phonon-stats: steady-state phonon statistics under two-phonon damping.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "phonon/app/config.hpp"
#include "phonon/app/evaluate.hpp"
#include "phonon/app/figures.hpp"
#include "phonon/app/log.hpp"
#include "phonon/app/output.hpp"
#include "phonon/app/validate.hpp"

namespace app = phonon::app;

namespace {

constexpr int kExitToleranceExceeded = 3;

// Everything the command line can set; unset fields leave the config alone.
struct Flags {
  std::optional<std::string> config_path, model, c, n_th, c_range, nth_range, out, format;
  std::optional<std::string> reference, candidate, eta_range;
  std::optional<int> trunc, dim_cav, jobs, max_dim;
  std::optional<double> kappa, gamma, omega_m, g0, eta, temperature, omega_ratio, n_c, tolerance;
  bool quadratic_fluctuation = false;
  std::string export_path;
  int figure = 0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config file; flags override its keys");
  sub->add_option("--model", f.model, "exact | hitemp | oracle-reduced | oracle-rwa | oracle-prerwa | auto");
  sub->add_option("--C", f.c, "multiphoton cooperativity (number, list or range)");
  sub->add_option("--n-th", f.n_th, "thermal occupation (number, list or range)");
  sub->add_option("--c-range", f.c_range, "C values as lo:hi:steps:log|lin or a comma list");
  sub->add_option("--nth-range", f.nth_range, "n_th values as lo:hi:steps:log|lin or a comma list");
  sub->add_option("--trunc", f.trunc, "fixed mechanical Fock cutoff for the oracles (default: converge)");
  sub->add_option("--dim-cav", f.dim_cav, "cavity Fock cutoff with --trunc (default 4)");
  sub->add_option("--max-dim", f.max_dim, "Hilbert-dimension cap for the convergence ladder (default 4096)");
  sub->add_option("--jobs", f.jobs, "worker threads (default 1)");
  sub->add_option("--out", f.out, "output path (directory for figure); default stdout");
  sub->add_option("--format", f.format, "csv | json");
  sub->add_option("--kappa", f.kappa, "cavity decay rate (default 400 in units of gamma)");
  sub->add_option("--gamma", f.gamma, "mechanical decay rate (default 1)");
  sub->add_option("--omega-ratio", f.omega_ratio, "omega_m' / kappa for oracle-prerwa (default 50)");
  sub->add_option("--n-c", f.n_c, "intracavity photon number for oracle-prerwa (default 1)");
  sub->add_flag("--quadratic-fluctuation", f.quadratic_fluctuation,
                "keep the g0 a^+a (b + b^+)^2 term in oracle-prerwa");
  sub->add_option("--omega-m", f.omega_m, "bare mechanical frequency (laboratory input)");
  sub->add_option("--g0", f.g0, "quadratic single-photon coupling (laboratory input)");
  sub->add_option("--eta", f.eta, "pump rate (laboratory input)");
  sub->add_option("--eta-range", f.eta_range, "pump rates to sweep (laboratory input)");
  sub->add_option("--temperature", f.temperature, "bath temperature in kelvin, omega_m in rad/s");
}

void apply_flags(app::RunConfig& c, const Flags& f) {
  if (f.model) c.model = app::parse_model(*f.model);
  if (f.c) c.c_values = app::parse_range(*f.c);
  if (f.c_range) c.c_values = app::parse_range(*f.c_range);
  if (f.n_th) c.nth_values = app::parse_range(*f.n_th);
  if (f.nth_range) c.nth_values = app::parse_range(*f.nth_range);
  if (f.trunc) c.oracle.dim_mech = *f.trunc;
  if (f.dim_cav) c.oracle.dim_cav = *f.dim_cav;
  if (f.max_dim) c.oracle.max_hilbert_dim = *f.max_dim;
  if (f.jobs) c.jobs = *f.jobs;
  if (f.out) c.out = *f.out;
  if (f.format) c.format = app::parse_format(*f.format);
  if (f.omega_ratio) c.oracle.omega_ratio = *f.omega_ratio;
  if (f.n_c) c.oracle.n_c = *f.n_c;
  if (f.quadratic_fluctuation) c.oracle.quadratic_fluctuation = true;
  if (f.reference) c.reference = app::parse_model(*f.reference);
  if (f.candidate) c.candidate = app::parse_model(*f.candidate);
  if (f.tolerance) c.tolerance = *f.tolerance;
  if (!f.export_path.empty()) c.export_liouvillian = f.export_path;

  const bool laboratory = f.g0 || f.eta || f.eta_range || f.omega_m || f.temperature || c.physical;
  if (laboratory) {
    phonon::PhysicalParams p = c.physical.value_or(phonon::PhysicalParams{});
    if (f.g0) p.g0 = *f.g0;
    if (f.kappa) p.kappa = *f.kappa;
    if (f.gamma) p.gamma = *f.gamma;
    if (f.omega_m) p.omega_m = *f.omega_m;
    if (f.eta) p.eta = *f.eta;
    if (f.eta_range) c.eta_values = app::parse_range(*f.eta_range);
    if (f.eta && !f.eta_range) c.eta_values.clear();
    if (f.temperature) {
      p.temperature = *f.temperature;
      p.n_th.reset();
    }
    if (!c.nth_values.empty() && (f.n_th || f.nth_range)) {
      p.n_th = c.nth_values.front();
      p.temperature.reset();
    }
    c.physical = p;
  } else {
    if (f.kappa) c.oracle.kappa = *f.kappa;
    if (f.gamma) c.oracle.gamma = *f.gamma;
  }
}

std::string render(const app::Table& t, app::Format format) {
  std::ostringstream s;
  if (format == app::Format::Csv) {
    app::write_csv(s, t);
  } else {
    s << app::to_json(t).dump(2) << '\n';
  }
  return s.str();
}

void export_liouvillian(const app::RunConfig& c, const app::Outcome& o) {
  if (c.export_liouvillian.empty() || !o.report) return;
  const auto model = app::oracle_model(o.model, o.point, c.oracle);
  phonon::TruncationSpec trunc;
  trunc.dim_mech = o.report->diagnostics.dim_mech;
  trunc.dim_cav = o.report->diagnostics.dim_cav;
  std::ofstream out(c.export_liouvillian);
  if (!out) throw app::ConfigError("cannot write '" + c.export_liouvillian + "'");
  phonon::write_triplets(out, phonon::build_liouvillian(model, trunc));
}

int run_stats(const app::RunConfig& c) {
  const auto points = app::grid_points(c);
  const auto outcome = app::evaluate_safely(c.model, points.front(), c.oracle);
  if (!c.export_liouvillian.empty() && outcome.report && outcome.report->diagnostics.dim_mech == 0) {
    throw app::ConfigError("--export-liouvillian needs an oracle model");
  }
  export_liouvillian(c, outcome);
  if (c.output_format() == app::Format::Json) {
    app::write_output(c.out, app::to_json(outcome).dump(2) + "\n");
  } else {
    app::write_output(c.out, render(app::outcomes_table({outcome}), app::Format::Csv));
  }
  if (!outcome.report) std::cerr << "phonon-stats: " << outcome.error << '\n';
  return outcome.exit_code;
}

int run_sweep(const app::RunConfig& c) {
  const auto outcomes = app::evaluate_all(c.model, app::grid_points(c), c.oracle, c.jobs);
  if (c.output_format() == app::Format::Json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& o : outcomes) j.push_back(app::to_json(o));
    app::write_output(c.out, j.dump(2) + "\n");
  } else {
    app::write_output(c.out, render(app::outcomes_table(outcomes), app::Format::Csv));
  }
  int code = 0;
  for (const auto& o : outcomes) code = std::max(code, o.exit_code);
  return code;
}

int run_figure(const app::RunConfig& c) {
  app::FigureOverrides o;
  o.c_values = c.c_values;
  o.nth_values = c.nth_values;
  o.jobs = c.jobs;
  const auto table = app::figure_table(c.figure, o);
  const auto format = c.output_format();
  if (c.out == "-") {
    app::write_output("", render(table, format));
    return 0;
  }
  const std::filesystem::path dir = c.out.empty() ? "." : c.out;
  std::filesystem::create_directories(dir);
  const std::string stem = "fig" + std::to_string(c.figure);
  const std::string data = stem + (format == app::Format::Csv ? ".csv" : ".json");
  app::write_output((dir / data).string(), render(table, format));
  if (format == app::Format::Csv) app::write_output((dir / (stem + "_plot.py")).string(), app::plot_script(c.figure, data));
  app::logger().info("wrote {}", (dir / data).string());
  return 0;
}

int run_validate(const app::RunConfig& c) {
  const auto summary = app::run_validation(c);
  if (c.output_format() == app::Format::Json) {
    app::write_output(c.out, app::to_json(summary).dump(2) + "\n");
  } else {
    app::write_output(c.out, render(app::to_table(summary), app::Format::Csv));
  }
  if (summary.failed > 0) return 2;
  return summary.passed ? 0 : kExitToleranceExceeded;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Steady-state phonon statistics of a mechanical oscillator under two-phonon optical damping."};
  cli.require_subcommand(1);
  Flags flags;

  auto* stats = cli.add_subcommand("stats", "Single parameter point as JSON");
  auto* sweep = cli.add_subcommand("sweep", "Grid over C and n_th (or pump rate)");
  auto* figure = cli.add_subcommand("figure", "Data and plotting script for figures 1-6");
  auto* validate = cli.add_subcommand("validate", "Compare two models over a grid");
  for (auto* sub : {stats, sweep, figure, validate}) add_common(sub, flags);
  stats->add_option("--export-liouvillian", flags.export_path, "write the oracle superoperator as triplets");
  figure->add_option("id", flags.figure, "figure number 1-6")->required();
  validate->add_option("--reference", flags.reference, "reference model (default exact)");
  validate->add_option("--candidate", flags.candidate, "candidate model (default oracle-reduced)");
  validate->add_option("--tol", flags.tolerance, "relative tolerance (default 1e-6)");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return 1;
  }

  try {
    app::RunConfig config;
    if (*stats) config.mode = app::Mode::Stats;
    if (*sweep) config.mode = app::Mode::Sweep;
    if (*figure) config.mode = app::Mode::Figure;
    if (*validate) config.mode = app::Mode::Validate;
    if (flags.config_path) {
      app::merge_config_file(config, *flags.config_path);
      config.mode = *stats ? app::Mode::Stats : *sweep ? app::Mode::Sweep : *figure ? app::Mode::Figure : app::Mode::Validate;
    }
    apply_flags(config, flags);
    if (*figure) config.figure = flags.figure;
    config.validate();
    app::logger().debug("mode {} model {}", app::to_string(config.mode), app::to_string(config.model));
    switch (config.mode) {
      case app::Mode::Stats: return run_stats(config);
      case app::Mode::Sweep: return run_sweep(config);
      case app::Mode::Figure: return run_figure(config);
      case app::Mode::Validate: return run_validate(config);
    }
  } catch (const std::exception& e) {
    std::cerr << "phonon-stats: " << e.what() << '\n';
    return app::exit_code_for(e);
  }
  return 0;
}
