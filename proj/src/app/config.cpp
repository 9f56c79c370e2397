#include "phonon/app/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace phonon::app {

namespace {

using nlohmann::json;

template <class Enum, std::size_t N>
Enum parse_enum(std::string_view text, const std::pair<std::string_view, Enum> (&table)[N],
                std::string_view what) {
  for (const auto& [name, value] : table) {
    if (name == text) return value;
  }
  std::string options;
  for (const auto& [name, value] : table) options += (options.empty() ? "" : ", ") + std::string(name);
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(text) + "' (expected " +
                    options + ")");
}

constexpr std::pair<std::string_view, Mode> kModes[] = {
    {"stats", Mode::Stats}, {"sweep", Mode::Sweep}, {"figure", Mode::Figure}, {"validate", Mode::Validate}};

constexpr std::pair<std::string_view, ModelKind> kModels[] = {
    {"exact", ModelKind::Exact},
    {"hitemp", ModelKind::Hitemp},
    {"oracle-reduced", ModelKind::OracleReduced},
    {"oracle-rwa", ModelKind::OracleRwa},
    {"oracle-prerwa", ModelKind::OraclePrerwa},
    {"auto", ModelKind::Auto}};

constexpr std::pair<std::string_view, Format> kFormats[] = {{"csv", Format::Csv}, {"json", Format::Json}};

template <class Enum, std::size_t N>
std::string_view name_of(Enum v, const std::pair<std::string_view, Enum> (&table)[N]) {
  for (const auto& [name, value] : table) {
    if (value == v) return name;
  }
  return "?";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

std::vector<double> values_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_string()) return parse_range(j.get<std::string>());
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) out.push_back(v.get<double>());
    return out;
  }
  throw ConfigError("expected a number, range string or array");
}

}  // namespace

std::string_view to_string(Mode m) { return name_of(m, kModes); }
std::string_view to_string(ModelKind m) { return name_of(m, kModels); }
std::string_view to_string(Format f) { return name_of(f, kFormats); }
Mode parse_mode(std::string_view text) { return parse_enum(text, kModes, "mode"); }
ModelKind parse_model(std::string_view text) { return parse_enum(text, kModels, "model"); }
Format parse_format(std::string_view text) { return parse_enum(text, kFormats, "format"); }

ModelKind resolve_model(ModelKind kind, double cooperativity, double n_th) {
  if (kind != ModelKind::Auto) return kind;
  return n_th > kAutoHitempRatio * cooperativity ? ModelKind::Hitemp : ModelKind::Exact;
}

std::vector<double> parse_range(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty range");
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 4) throw ConfigError("range must be lo:hi:steps:log|lin, got '" + std::string(text) + "'");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double steps_d = parse_number(parts[2]);
    const auto spacing = trim(parts[3]);
    if (steps_d < 1 || steps_d != std::floor(steps_d)) throw ConfigError("range steps must be a positive integer");
    const int steps = static_cast<int>(steps_d);
    if (hi < lo) throw ConfigError("range upper bound below lower bound");
    if (steps > 1 && hi == lo) throw ConfigError("range spacing must be positive");
    std::vector<double> out(static_cast<std::size_t>(steps));
    if (spacing == "log") {
      if (lo <= 0.0) throw ConfigError("log range needs a positive lower bound");
      const double a = std::log10(lo), b = std::log10(hi);
      for (int i = 0; i < steps; ++i) out[i] = steps == 1 ? lo : std::pow(10.0, a + (b - a) * i / (steps - 1));
      out.front() = lo;
      out.back() = steps == 1 ? lo : hi;
    } else if (spacing == "lin") {
      for (int i = 0; i < steps; ++i) out[i] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    } else {
      throw ConfigError("range spacing must be log or lin");
    }
    return out;
  }
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_number(part));
  return out;
}

void RunConfig::validate() const {
  const auto nonneg = [](const std::vector<double>& v, const char* what, bool strict) {
    for (double x : v) {
      if (!std::isfinite(x) || x < 0.0 || (strict && x == 0.0)) {
        throw ConfigError(std::string(what) + " must be " + (strict ? "> 0" : ">= 0") + ", got " +
                          std::to_string(x));
      }
    }
  };
  nonneg(nth_values, "n_th", false);
  // C = 0 is legal for the oracles; the analytic models reject it per point.
  nonneg(c_values, "C", false);
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (oracle.dim_mech && *oracle.dim_mech < 2) throw ConfigError("trunc must be >= 2");
  if (oracle.dim_cav < 2) throw ConfigError("dim-cav must be >= 2");
  if (!(oracle.kappa > 0.0) || !(oracle.gamma > 0.0)) throw ConfigError("kappa and gamma must be > 0");
  if (!(oracle.omega_ratio > 0.0) || !(oracle.n_c > 0.0)) throw ConfigError("omega-ratio and n-c must be > 0");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
  if (physical) {
    try {
      physical->validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    for (double eta : eta_values) {
      if (!(eta >= 0.0)) throw ConfigError("eta must be >= 0");
    }
  }
  switch (mode) {
    case Mode::Stats:
      if (!physical && (c_values.size() != 1 || nth_values.size() != 1)) {
        throw ConfigError("stats needs exactly one C and one n_th (or laboratory parameters)");
      }
      if (physical && eta_values.size() > 1) throw ConfigError("stats takes a single eta");
      break;
    case Mode::Sweep:
      if (!physical && (c_values.empty() || nth_values.empty())) {
        throw ConfigError("sweep needs non-empty C and n_th ranges");
      }
      break;
    case Mode::Figure:
      if (figure < 1 || figure > 6) throw ConfigError("figure id must be 1..6");
      break;
    case Mode::Validate:
      if (reference == ModelKind::Auto || candidate == ModelKind::Auto) {
        throw ConfigError("validate needs explicit reference and candidate models");
      }
      break;
  }
}

Format RunConfig::output_format() const {
  if (format) return *format;
  return mode == Mode::Sweep || mode == Mode::Figure ? Format::Csv : Format::Json;
}

void merge_config_text(RunConfig& c, std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "mode") {
        c.mode = parse_mode(v.get<std::string>());
      } else if (key == "model") {
        c.model = parse_model(v.get<std::string>());
      } else if (key == "C" || key == "c_range") {
        c.c_values = values_from_json(v);
      } else if (key == "n_th" || key == "nth_range") {
        c.nth_values = values_from_json(v);
      } else if (key == "trunc") {
        c.oracle.dim_mech = v.get<int>();
      } else if (key == "dim_cav") {
        c.oracle.dim_cav = v.get<int>();
      } else if (key == "kappa") {
        c.oracle.kappa = v.get<double>();
      } else if (key == "gamma") {
        c.oracle.gamma = v.get<double>();
      } else if (key == "omega_ratio") {
        c.oracle.omega_ratio = v.get<double>();
      } else if (key == "n_c") {
        c.oracle.n_c = v.get<double>();
      } else if (key == "quadratic_fluctuation") {
        c.oracle.quadratic_fluctuation = v.get<bool>();
      } else if (key == "max_hilbert_dim") {
        c.oracle.max_hilbert_dim = v.get<int>();
      } else if (key == "figure") {
        c.figure = v.get<int>();
      } else if (key == "reference") {
        c.reference = parse_model(v.get<std::string>());
      } else if (key == "candidate") {
        c.candidate = parse_model(v.get<std::string>());
      } else if (key == "tolerance") {
        c.tolerance = v.get<double>();
      } else if (key == "jobs") {
        c.jobs = v.get<int>();
      } else if (key == "out") {
        c.out = v.get<std::string>();
      } else if (key == "format") {
        c.format = parse_format(v.get<std::string>());
      } else if (key == "physical") {
        PhysicalParams p = c.physical.value_or(PhysicalParams{});
        for (const auto& [pk, pv] : v.items()) {
          if (pk == "g0") p.g0 = pv.get<double>();
          else if (pk == "kappa") p.kappa = pv.get<double>();
          else if (pk == "gamma") p.gamma = pv.get<double>();
          else if (pk == "omega_m") p.omega_m = pv.get<double>();
          else if (pk == "eta") {
            c.eta_values = values_from_json(pv);
            p.eta = c.eta_values.front();
          } else if (pk == "n_th") p.n_th = pv.get<double>();
          else if (pk == "temperature") p.temperature = pv.get<double>();
          else throw ConfigError("config: unknown physical key '" + pk + "'");
        }
        c.physical = p;
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

void merge_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  merge_config_text(config, text.str());
}

}  // namespace phonon::app
