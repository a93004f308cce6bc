#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace deform {

/// Table of results plus JSON metadata. Columns named `value`, `limit` and
/// `abs_error` are tied together: abs_error = |value - limit| wherever limit
/// is finite, and load() refuses files where that fails.
struct ConvergenceReport {
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
  std::vector<double> column_values(const std::string& name) const;
  void add_row(std::vector<double> row);

  /// abs_error strictly decreasing down the rows.
  bool error_decreasing() const;

  std::string to_csv() const;
  void save(const std::string& path) const;
  static ConvergenceReport from_csv(const std::string& text);
  static ConvergenceReport load(const std::string& path);
};

}  // namespace deform
