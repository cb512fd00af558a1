#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace rmp {

/// Bumped whenever a column is renamed, removed or reordered.
inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<double, std::int64_t, std::string, bool>;

/// Rectangular result table plus a provenance object.
struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  /// Throws ArgumentError when the row width differs from the column count.
  void add_row(std::vector<Cell> row);
  /// Index of a column, or ArgumentError.
  std::size_t column(const std::string& name) const;
};

/// Shortest decimal that round-trips; empty for NaN, "inf" / "-inf".
std::string format_double(double v);

/// RFC 4180 CSV preceded by "# key: <json>" provenance lines.
void write_csv(std::ostream& out, const SweepTable& table);
/// {"metadata": ..., "records": [{column: value, ...}, ...]}; NaN becomes null.
void write_json(std::ostream& out, const SweepTable& table);

}  // namespace rmp
