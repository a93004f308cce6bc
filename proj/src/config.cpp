#include "deform/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "deform/errors.hpp"
#include "deform/symbols.hpp"

namespace deform {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
}

long long integer(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used == v.size()) return x;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
}

bool boolean(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: '" + key + "' expects true/false, got '" + v + "'");
}

std::pair<double, double> interval(const std::string& key, const std::string& v) {
  const auto parts = list(v);
  if (parts.size() != 2) throw ConfigError("config: '" + key + "' expects lo,hi");
  const double lo = real(key, parts[0]), hi = real(key, parts[1]);
  if (!(lo < hi)) throw ConfigError("config: '" + key + "' needs lo < hi");
  return {lo, hi};
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream o;
  o << std::hex;
  o.width(16);
  o.fill('0');
  o << v;
  return o.str();
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"bulk-sine", "edge-airy", "discrete-sine",
                                              "mc-verify", "gap",       "equilibrium"};
  return names;
}

void ExperimentConfig::set(const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string v = trim(value_in);
  if (key == "scenario") {
    scenario = v == "gap-probability" ? "gap" : v;
  } else if (key == "potential") {
    potential = v;
  } else if (key == "weight") {
    weight = v;
  } else if (key == "node_density") {
    node_density = v;
  } else if (key == "beta") {
    beta = real(key, v);
  } else if (key == "x_star") {
    x_star = real(key, v);
  } else if (key == "kappa") {
    kappa = real(key, v);
  } else if (key == "symbol") {
    symbol = v;
  } else if (key == "t") {
    t = real(key, v);
  } else if (key == "n") {
    n_list.clear();
    for (const auto& s : list(v)) n_list.push_back(static_cast<int>(integer(key, s)));
  } else if (key == "h") {
    h = v;
  } else if (key == "allow_discontinuous_h") {
    allow_discontinuous_h = boolean(key, v);
  } else if (key == "window") {
    window = interval(key, v);
  } else if (key == "quad_order") {
    quad_order = static_cast<int>(integer(key, v));
  } else if (key == "max_panel") {
    max_panel = real(key, v);
  } else if (key == "seed") {
    seed = static_cast<std::uint64_t>(integer(key, v));
  } else if (key == "replicas") {
    replicas = integer(key, v);
  } else if (key == "threads") {
    threads = static_cast<int>(integer(key, v));
  } else if (key == "out") {
    out = v;
  } else if (key == "gap_kernel") {
    gap_kernel = v;
  } else if (key == "s_grid") {
    s_grid.clear();
    for (const auto& s : list(v)) s_grid.push_back(real(key, s));
  } else if (key == "series_kmax") {
    series_kmax = static_cast<int>(integer(key, v));
  } else if (key == "mc_window") {
    mc_window = interval(key, v);
  } else if (key == "mc_cells") {
    mc_cells = static_cast<int>(integer(key, v));
  } else if (key == "dump_samples") {
    dump_samples = v;
  } else if (key == "kernel_window") {
    kernel_window = real(key, v);
  } else if (key == "cells") {
    cells = static_cast<int>(integer(key, v));
  } else if (key == "constrained") {
    constrained = boolean(key, v);
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
  entries_[key] = v;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    c.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

void ExperimentConfig::validate() const {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), scenario) == names.end())
    throw ConfigError("config: unknown scenario '" + scenario + "'");
  const bool sweep = scenario != "gap" && scenario != "equilibrium";
  if (sweep && n_list.empty()) throw ConfigError("config: 'n' must list at least one size");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw ConfigError("config: sizes in 'n' must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw ConfigError("config: 'n' must be strictly increasing");
  }
  if (!(t >= 0.0)) throw ConfigError("config: t must be >= 0");
  if (quad_order < 2 || quad_order > 200) throw ConfigError("config: quad_order out of range");
  if (!(max_panel > 0.0)) throw ConfigError("config: max_panel must be > 0");
  if (replicas < 1) throw ConfigError("config: replicas must be >= 1");
  if (series_kmax < 0) throw ConfigError("config: series_kmax must be >= 0");
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("config: need 0 < beta < 1");
  if (scenario == "gap" && gap_kernel != "sine" && gap_kernel != "airy" &&
      gap_kernel != "discrete-sine")
    throw ConfigError("config: gap_kernel must be sine, airy or discrete-sine");

  const DeformationSymbol sigma = DeformationSymbol::parse(symbol, scenario == "edge-airy");
  const TestFunction hf = TestFunction::parse(h, allow_discontinuous_h);
  if (window) {
    const auto [lo, hi] = *window;
    if (hf.name != "zero" && (hf.lo < lo || hf.hi > hi))
      throw ConfigError("config: window does not contain the support of h");
    if (!sigma.is_zero() && t == 0.0) {
      const auto [a, b] = sigma.effective_support();
      if ((std::isfinite(a) && a < lo) || (std::isfinite(b) && b > hi))
        throw ConfigError("config: window does not contain the effective support of sigma");
    }
  }
}

std::string ExperimentConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(canonical()); }

}  // namespace deform
