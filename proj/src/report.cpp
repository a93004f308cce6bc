#include "deform/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "deform/config.hpp"
#include "deform/errors.hpp"

namespace deform {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_num(const std::string& s) {
  if (s == "nan") return NAN;
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("report: bad number '" + s + "'");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int ConvergenceReport::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<double> ConvergenceReport::column_values(const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw ConfigError("report: no column '" + name + "'");
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

void ConvergenceReport::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw Error("report: row width does not match columns");
  rows.push_back(std::move(row));
}

bool ConvergenceReport::error_decreasing() const {
  const int c = column("abs_error");
  if (c < 0 || rows.empty()) return false;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i][c] < rows[i - 1][c])) return false;
  return true;
}

std::string ConvergenceReport::to_csv() const {
  std::string out = "# " + metadata.dump() + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + num(r[i]);
    out += "\n";
  }
  return out;
}

void ConvergenceReport::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write report '" + path + "'");
  f << to_csv();
}

ConvergenceReport ConvergenceReport::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  ConvergenceReport r;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw ConfigError("report: missing metadata line");
  try {
    r.metadata = nlohmann::json::parse(line.substr(2));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("report: bad metadata: ") + e.what());
  }
  if (!std::getline(in, line)) throw ConfigError("report: missing header");
  r.columns = split_csv(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != r.columns.size()) throw ConfigError("report: ragged row");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_num(c));
    r.rows.push_back(std::move(row));
  }
  if (r.metadata.contains("config") && r.metadata.contains("config_hash") &&
      r.metadata["config_hash"] != hex64(fnv1a(r.metadata["config"].get<std::string>())))
    throw ConfigError("report: config hash does not match the recorded config");
  const int v = r.column("value"), l = r.column("limit"), e = r.column("abs_error");
  if (v >= 0 && l >= 0 && e >= 0)
    for (const auto& row : r.rows) {
      if (!std::isfinite(row[l])) continue;
      const double want = std::abs(row[v] - row[l]);
      if (!(std::abs(want - row[e]) <= 1e-12 * (1.0 + std::abs(want))))
        throw ConfigError("report: error column does not match |value - limit|");
    }
  return r;
}

ConvergenceReport ConvergenceReport::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read report '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return from_csv(ss.str());
}

}  // namespace deform
