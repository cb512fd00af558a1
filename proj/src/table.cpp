#include "rmp/table.hpp"

#include <charconv>
#include <cmath>

#include "rmp/errors.hpp"

namespace rmp {

void SweepTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw ArgumentError("row has " + std::to_string(row.size()) + " cells, table has " +
                        std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

std::size_t SweepTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ArgumentError("no column named " + name);
}

std::string format_double(double v) {
  if (std::isnan(v)) return {};
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, double>)
          return format_double(v);
        else if constexpr (std::is_same_v<V, bool>)
          return v ? "true" : "false";
        else if constexpr (std::is_same_v<V, std::string>)
          return v;
        else
          return std::to_string(v);
      },
      c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, double>) {
          if (!std::isfinite(v)) return nullptr;
        }
        return v;
      },
      c);
}

}  // namespace

void write_csv(std::ostream& out, const SweepTable& table) {
  for (const auto& [key, value] : table.metadata.items())
    out << "# " << key << ": " << value.dump() << "\r\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << csv_field(table.columns[i]);
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_field(cell_text(row[i]));
    out << "\r\n";
  }
}

void write_json(std::ostream& out, const SweepTable& table) {
  nlohmann::ordered_json doc;
  doc["metadata"] = table.metadata;
  auto& records = doc["records"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) rec[table.columns[i]] = cell_json(row[i]);
    records.push_back(std::move(rec));
  }
  out << doc.dump(2) << "\n";
}

}  // namespace rmp
