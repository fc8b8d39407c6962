#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qlab {

/// One cell of a result table: integers, reals, and labels keep their type
/// so the JSON mirror is faithful and the CSV stays round-trippable.
using Cell = std::variant<int64_t, uint64_t, double, std::string, bool>;

/// Tabular experiment output with run metadata. Columns are fixed at
/// construction; every row must match them. The same report serializes to
/// CSV (header + rows, RFC-4180 quoting) and to a JSON mirror carrying the
/// metadata block alongside the rows.
class ExperimentReport {
 public:
  ExperimentReport(std::string experiment, std::vector<std::string> columns);

  void set_meta(const std::string& key, Cell value);
  void add_row(std::vector<Cell> row);

  const std::string& experiment() const { return experiment_; }
  const std::vector<std::string>& columns() const { return columns_; }
  size_t rows() const { return rows_.size(); }

  std::string to_csv() const;
  std::string to_json() const;  // pretty-printed, stable key order

  /// Write `to_csv()` / `to_json()` to `path` depending on its extension
  /// (".json" selects JSON, anything else CSV). Creates parent directories.
  void write(const std::string& path) const;

 private:
  std::string experiment_;
  std::vector<std::string> columns_;
  std::map<std::string, Cell> meta_;
  std::vector<std::vector<Cell>> rows_;
};

/// Format a cell for CSV (quotes and escapes strings when needed; doubles
/// use max round-trip precision).
std::string cell_to_csv(const Cell& cell);

}  // namespace qlab
