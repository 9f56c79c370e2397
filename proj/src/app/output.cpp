#include "phonon/app/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "phonon/app/config.hpp"

namespace phonon::app {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw Error("no column '" + std::string(name) + "'");
}

namespace {

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "null";
        else if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else return csv_field(v);
      },
      c);
}

json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) return std::isfinite(v) ? json(v) : json(nullptr);
        else return json(v);
      },
      c);
}

Cell optional_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << csv_field(table.columns[i]);
  }
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << "\r\n";
  }
}

json to_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return rows;
}

json to_json(const SteadyStateReport& r) {
  json j;
  j["model"] = r.model;
  j["n_ss"] = r.n_ss;
  j["g2"] = r.g2 ? json(*r.g2) : json(nullptr);
  j["regime"] = std::string(to_string(r.regime));
  j["fano_factor"] = r.n_ss > 0.0 ? json(r.fano_factor()) : json(nullptr);
  j["populations"] = r.populations;
  json d;
  d["series_terms"] = r.diagnostics.series_terms;
  d["tail_mass"] = r.diagnostics.tail_mass;
  if (r.diagnostics.dim_mech > 0) {
    d["dim_mech"] = r.diagnostics.dim_mech;
    d["dim_cav"] = r.diagnostics.dim_cav;
    d["residual"] = r.diagnostics.residual;
    d["top_population"] = r.diagnostics.top_population;
  }
  if (r.diagnostics.cavity_occupation) d["cavity_occupation"] = *r.diagnostics.cavity_occupation;
  if (r.diagnostics.min_eigenvalue) d["min_eigenvalue"] = *r.diagnostics.min_eigenvalue;
  j["diagnostics"] = d;
  return j;
}

json to_json(const Outcome& o) {
  json j;
  j["C"] = o.point.cooperativity;
  j["n_th"] = o.point.n_th;
  if (o.point.reduced) {
    const auto& r = *o.point.reduced;
    j["derived"] = {{"n_c", r.n_c},         {"g", r.g},         {"omega_m_eff", r.omega_m_eff},
                    {"gamma_opt", r.gamma_opt}, {"delta_c", r.delta_c}, {"iterations", r.iterations}};
  }
  j["model"] = std::string(to_string(o.model));
  if (o.report) {
    j["report"] = to_json(*o.report);
  } else {
    j["error"] = o.error;
  }
  return j;
}

Table outcomes_table(const std::vector<Outcome>& outcomes) {
  Table t;
  t.columns = {"C", "n_th", "model", "n_ss", "g2", "regime", "fano_factor", "tail_mass", "dim_mech", "dim_cav", "status"};
  for (const auto& o : outcomes) {
    std::vector<Cell> row{o.point.cooperativity, o.point.n_th, std::string(to_string(o.model))};
    if (o.report) {
      const auto& r = *o.report;
      row.insert(row.end(), {r.n_ss, optional_cell(r.g2), std::string(to_string(r.regime)),
                             r.n_ss > 0.0 ? Cell(r.fano_factor()) : Cell(std::monostate{}),
                             r.diagnostics.tail_mass, static_cast<long long>(r.diagnostics.dim_mech),
                             static_cast<long long>(r.diagnostics.dim_cav), std::string("ok")});
    } else {
      row.insert(row.end(), 7, std::monostate{});
      row.push_back("error: " + o.error);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

}  // namespace phonon::app
