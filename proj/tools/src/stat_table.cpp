#include "stat_table.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace hypdir::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void StatTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match the column count");
  rows.push_back(std::move(row));
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

struct CsvCell {
  std::string operator()(std::monostate) const { return {}; }
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(double v) const { return format_double(v); }
  std::string operator()(const std::string& s) const { return csv_field(s); }
};

struct JsonCell {
  nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
  nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
  nlohmann::ordered_json operator()(double v) const {
    if (std::isfinite(v)) return v;
    return nullptr;
  }
  nlohmann::ordered_json operator()(const std::string& s) const { return s; }
};

}  // namespace

void StatTable::write_csv(std::ostream& out) const {
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << csv_field(columns[c]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << std::visit(CsvCell{}, row[c]);
    out << '\n';
  }
}

void StatTable::write_json(std::ostream& out) const {
  nlohmann::ordered_json doc;
  doc["meta"] = meta;
  nlohmann::ordered_json data;
  data["columns"] = columns;
  data["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) r.push_back(std::visit(JsonCell{}, cell));
    data["rows"].push_back(std::move(r));
  }
  doc["data"] = std::move(data);
  doc["stderr"] = notes;
  out << doc.dump(2) << '\n';
}

}  // namespace hypdir::cli
