#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "phonon/app/evaluate.hpp"

namespace phonon::app {

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view text);

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(std::string_view name) const;
};

/// Null cells are written as the bare word null.
void write_csv(std::ostream& out, const Table& table);
nlohmann::json to_json(const Table& table);

nlohmann::json to_json(const SteadyStateReport& report);
nlohmann::json to_json(const Outcome& outcome);

/// One row per outcome, no populations.
Table outcomes_table(const std::vector<Outcome>& outcomes);

/// Writes to `path`, or stdout when empty.
void write_output(const std::string& path, const std::string& text);

}  // namespace phonon::app
