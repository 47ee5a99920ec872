#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace lab {

using Cell = std::variant<std::string, double, std::int64_t>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

enum class Format { csv, json };

/// Shortest round-trip decimal; -0 prints as 0.
std::string format_double(double x);

void write_csv(std::ostream& out, const Table& table);
/// Array of objects keyed by column name.
void write_json(std::ostream& out, const Table& table);
void write_table(std::ostream& out, const Table& table, Format format);

}  // namespace lab
