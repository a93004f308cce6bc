#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace deform {

/// Experiment description read from `key = value` text (`#` starts a comment).
///
/// Keys: scenario, potential, weight, node_density, beta, x_star, kappa,
/// symbol, t, n, h, allow_discontinuous_h, window, quad_order, max_panel,
/// seed, replicas, threads, out, gap_kernel, s_grid, series_kmax, mc_window,
/// mc_cells, dump_samples, kernel_window, cells, constrained.
struct ExperimentConfig {
  std::string scenario;
  std::string potential = "quadratic";
  std::string weight = "krawtchouk:0.3";
  std::string node_density = "uniform";
  double beta = 0.5;
  std::optional<double> x_star;
  std::optional<double> kappa;
  std::string symbol = "zero";
  double t = 0.0;
  std::vector<int> n_list;
  std::string h = "zero";
  bool allow_discontinuous_h = false;
  std::optional<std::pair<double, double>> window;
  int quad_order = 20;
  double max_panel = 1.0;
  std::uint64_t seed = 20240601;
  std::int64_t replicas = 100000;
  int threads = 0;
  std::string out;
  std::string gap_kernel = "sine";
  std::vector<double> s_grid;
  int series_kmax = 4;
  std::pair<double, double> mc_window{-4.0, 4.0};
  int mc_cells = 400;
  std::string dump_samples;
  double kernel_window = 3.0;
  int cells = 2000;
  bool constrained = false;

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  /// Assigns one key; throws ConfigError for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Cross-field checks (scenario known, n strictly increasing, specs parse,
  /// window covers h and sigma).
  void validate() const;

  /// Sorted `key=value` lines of every key that was set.
  std::string canonical() const;
  /// FNV-1a of canonical().
  std::uint64_t hash() const;
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t v);

const std::vector<std::string>& scenario_names();

}  // namespace deform
