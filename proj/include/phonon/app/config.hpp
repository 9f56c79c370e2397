#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phonon/errors.hpp"
#include "phonon/params.hpp"

namespace phonon::app {

/// Invalid user input. Maps to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Mode { Stats, Sweep, Figure, Validate };
enum class ModelKind { Exact, Hitemp, OracleReduced, OracleRwa, OraclePrerwa, Auto };
enum class Format { Csv, Json };

std::string_view to_string(Mode m);
std::string_view to_string(ModelKind m);
std::string_view to_string(Format f);
Mode parse_mode(std::string_view text);
ModelKind parse_model(std::string_view text);
Format parse_format(std::string_view text);

/// auto picks hitemp above this n_th / C, where the exact series gets long.
inline constexpr double kAutoHitempRatio = 1e6;

ModelKind resolve_model(ModelKind kind, double cooperativity, double n_th);

/// "lo:hi:steps:log|lin", a comma list, or a single number.
std::vector<double> parse_range(std::string_view text);

/// Settings for the Lindblad oracles.
struct OracleSettings {
  std::optional<int> dim_mech;  ///< fixed cutoff; empty runs the convergence ladder
  int dim_cav = 4;              ///< used with a fixed cutoff
  double kappa = 400.0;         ///< units of gamma when driven by C
  double gamma = 1.0;
  double omega_ratio = 50.0;  ///< omega_m' / kappa for oracle-prerwa
  double n_c = 1.0;           ///< intracavity photons for oracle-prerwa
  bool quadratic_fluctuation = false;
  int max_hilbert_dim = 4096;
  double rel_tol = 1e-6;
};

struct RunConfig {
  Mode mode = Mode::Stats;
  ModelKind model = ModelKind::Auto;
  std::vector<double> c_values;
  std::vector<double> nth_values;

  /// Laboratory parameters instead of (C, n_th). eta_values sweeps the pump.
  std::optional<PhysicalParams> physical;
  std::vector<double> eta_values;

  OracleSettings oracle;

  int figure = 0;

  ModelKind reference = ModelKind::Exact;
  ModelKind candidate = ModelKind::OracleReduced;
  double tolerance = 1e-6;

  int jobs = 1;
  std::string out;  ///< file (stats, sweep, validate) or directory (figure); empty = stdout
  std::optional<Format> format;
  std::string export_liouvillian;

  /// Throws ConfigError.
  void validate() const;
  Format output_format() const;
};

/// Overlay the keys present in a JSON config file onto `config`.
void merge_config_file(RunConfig& config, const std::string& path);
void merge_config_text(RunConfig& config, std::string_view json_text);

}  // namespace phonon::app
