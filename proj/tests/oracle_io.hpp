#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Whitespace-separated numeric rows of an oracle table; '#' lines skipped.
inline std::vector<std::vector<std::string>> oracle_rows(const std::string& file) {
  std::ifstream in(std::string(DEFORM_ORACLE_DIR) + "/" + file);
  if (!in) throw std::runtime_error("missing oracle table " + file);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> cells;
    for (std::string c; ss >> c;) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}
