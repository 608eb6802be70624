#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace hypdir::cli {

// Empty cells are written as an empty CSV field and as null in JSON.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

// Shortest decimal string that reads back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

struct StatTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<std::string> notes;

  explicit StatTable(std::vector<std::string> cols = {}) : columns(std::move(cols)) {}

  void add_row(std::vector<Cell> row);

  void write_csv(std::ostream& out) const;
  // {"meta": ..., "data": {"columns": [...], "rows": [[...], ...]}, "stderr": [...]}
  void write_json(std::ostream& out) const;
};

}  // namespace hypdir::cli
