#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "deform/discrete_gas.hpp"
#include "deform/orthopoly.hpp"

namespace deform {

/// Joint density of n <= 3 particles on a grid of cells, proportional to
/// det[u_i^k]^2 prod w(u_i), with the chain-rule tables used for sampling.
struct GridDensity {
  int n = 0;
  std::vector<double> points;  // cell midpoints (or lattice sites)
  std::vector<double> mass;    // w(u_i) times cell length (1 on lattices)
  Eigen::MatrixXd phi;         // n x m, orthonormal: sum_i phi_k(i) phi_l(i) = delta
  std::vector<double> p1;      // marginal of one particle
  std::vector<double> p1_cdf;
  Eigen::MatrixXd p2_cdf;      // column i: cdf of the second index given the first
  double log_z = 0.0;          // log of sum over the grid of det^2 prod mass

  std::size_t size() const noexcept { return points.size(); }
  /// Normalized joint probability of an index tuple (length n).
  double joint(const int* idx) const;
};

/// Grid density in microscopic units u for the ensemble with weight
/// exp(-n V(map.to_x(u))): `cells` equal cells on [lo, hi].
/// Throws CostGuardError for n > 3 or more than 400 cells when n = 3.
GridDensity build_grid_density(const Potential& V, int n, const ScaleMap& map, double lo,
                               double hi, int cells);

/// Same on the scaled lattice sites inside [lo, hi], with the discrete weights.
GridDensity build_grid_density(const DiscreteEnsemble& ens, const ScaledLattice& lattice,
                               double lo, double hi);

struct Configuration {
  int n = 0;
  std::array<int, 3> idx{};
  std::array<double, 3> u{};
};

/// `count` i.i.d. configurations; configuration r uses RNG stream r.
std::vector<Configuration> sample(const GridDensity& density, std::int64_t count,
                                  std::uint64_t seed);

struct MarkedSample {
  Configuration config;
  std::array<int, 3> marks{};
  bool accepted = false;
};

struct ConditionedSamples {
  std::vector<MarkedSample> marked;
  std::vector<Configuration> accepted;
  std::int64_t trials = 0;
  double rate = 0.0;     // accepted / trials
  double rate_se = 0.0;  // binomial standard error
};

/// Bernoulli(sigma(u_j)) marks, independent across particles; keeps the
/// configurations whose marks are all 0. Throws StatisticsError when the
/// acceptance rate is below 1e-3 after 1e4 trials.
ConditionedSamples mark_and_condition(const std::vector<Configuration>& samples,
                                      const std::function<double(double)>& sigma,
                                      std::uint64_t seed);

struct McEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::int64_t count = 0;
  double acceptance_rate = 1.0;
};

/// Mean of prod_k (1 - h(u_k)) over the samples. Needs >= 100 samples.
McEstimate estimate_pgf(const std::vector<Configuration>& samples,
                        const std::function<double(double)>& h);

/// Writes replica, particle, position, mark rows.
void dump_samples_csv(const std::string& path, const std::vector<MarkedSample>& samples);

}  // namespace deform
