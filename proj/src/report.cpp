#include "qlab/report.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qlab {

namespace {

std::string double_to_string(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("double_to_string failed");
  return std::string(buf, ptr);
}

nlohmann::json cell_to_json(const Cell& cell) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, cell);
}

}  // namespace

std::string cell_to_csv(const Cell& cell) {
  if (std::holds_alternative<std::string>(cell)) {
    const std::string& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    return quoted;
  }
  if (std::holds_alternative<double>(cell))
    return double_to_string(std::get<double>(cell));
  if (std::holds_alternative<int64_t>(cell))
    return std::to_string(std::get<int64_t>(cell));
  if (std::holds_alternative<uint64_t>(cell))
    return std::to_string(std::get<uint64_t>(cell));
  return std::get<bool>(cell) ? "true" : "false";
}

ExperimentReport::ExperimentReport(std::string experiment,
                                   std::vector<std::string> columns)
    : experiment_(std::move(experiment)), columns_(std::move(columns)) {
  if (columns_.empty())
    throw std::invalid_argument("ExperimentReport: no columns");
}

void ExperimentReport::set_meta(const std::string& key, Cell value) {
  meta_[key] = std::move(value);
}

void ExperimentReport::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("ExperimentReport: row width mismatch");
  rows_.push_back(std::move(row));
}

std::string ExperimentReport::to_csv() const {
  std::string out;
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_to_csv(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string ExperimentReport::to_json() const {
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : meta_) meta[k] = cell_to_json(v);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json obj = nlohmann::json::object();
    for (size_t i = 0; i < row.size(); ++i)
      obj[columns_[i]] = cell_to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  nlohmann::json doc{{"experiment", experiment_},
                     {"meta", std::move(meta)},
                     {"columns", columns_},
                     {"rows", std::move(rows)}};
  return doc.dump(2) + "\n";
}

void ExperimentReport::write(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << (p.extension() == ".json" ? to_json() : to_csv());
}

}  // namespace qlab
