#include "deform/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "deform/errors.hpp"
#include "deform/parallel_kernels.hpp"
#include "deform/rng.hpp"

namespace deform {

namespace {

constexpr std::uint64_t kMarkStreams = 0x6d61726b73ULL;

double det_squared(const GridDensity& g, const int* idx) {
  const Eigen::Index n = g.n;
  Eigen::Matrix3d M = Eigen::Matrix3d::Identity();
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index k = 0; k < n; ++k) M(a, k) = g.phi(k, idx[a]);
  double d = 0.0;
  if (n == 1) d = M(0, 0);
  if (n == 2) d = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  if (n == 3) d = M.determinant();
  return d * d;
}

GridDensity build(int n, std::vector<double> points, const std::vector<double>& log_mass) {
  if (n < 1) throw ParameterError("build_grid_density: n must be >= 1");
  if (n > 3) throw CostGuardError("build_grid_density: exact enumeration is capped at n = 3");
  const Eigen::Index m = static_cast<Eigen::Index>(points.size());
  if (m < n) throw ParameterError("build_grid_density: fewer grid points than particles");
  if ((n == 3 && m > 400) || m > 2000)
    throw CostGuardError("build_grid_density: grid too large for exact enumeration");

  GridDensity g;
  g.n = n;
  g.points = std::move(points);
  const double top = *std::max_element(log_mass.begin(), log_mass.end());
  double reach = 0.0;
  for (double u : g.points) reach = std::max(reach, std::abs(u));
  if (reach == 0.0) reach = 1.0;
  g.mass.resize(m);
  Eigen::MatrixXd B(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double lm = log_mass[i] - top;
    g.mass[i] = lm < std::log(1e-300) ? 0.0 : std::exp(lm);
    const double s = std::sqrt(g.mass[i]);
    double p = 1.0;
    for (int k = 0; k < n; ++k) {
      B(i, k) = p * s;
      p *= g.points[i] / reach;
    }
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, n);
  g.phi = Q.transpose();
  const Eigen::MatrixXd R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  g.log_z = std::lgamma(n + 1.0) + n * top;
  for (int k = 0; k < n; ++k)
    g.log_z += 2.0 * std::log(std::abs(R(k, k))) + 2.0 * k * std::log(reach);

  g.p1.resize(m);
  g.p1_cdf.resize(m);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    g.p1[i] = g.phi.col(i).squaredNorm() / n;
    acc += g.p1[i];
    g.p1_cdf[i] = acc;
  }
  if (n >= 2) {
    const Eigen::MatrixXd K = g.phi.transpose() * g.phi;
    g.p2_cdf.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      double run = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) {
        const double pair = std::max(0.0, K(i, i) * K(j, j) - K(i, j) * K(i, j));
        run += i == j ? 0.0 : pair;
        g.p2_cdf(j, i) = run;
      }
    }
  }
  return g;
}

int draw(const double* cdf, Eigen::Index m, double u) {
  const double target = u * cdf[m - 1];
  const double* it = std::upper_bound(cdf, cdf + m, target);
  return static_cast<int>(std::min<Eigen::Index>(it - cdf, m - 1));
}

}  // namespace

double GridDensity::joint(const int* idx) const {
  return det_squared(*this, idx) / std::tgamma(n + 1.0);
}

GridDensity build_grid_density(const Potential& V, int n, const ScaleMap& map, double lo,
                               double hi, int cells) {
  if (!(lo < hi) || cells < 1) throw ParameterError("build_grid_density: bad grid");
  const double h = (hi - lo) / cells;
  std::vector<double> pts(cells), lm(cells);
  for (int i = 0; i < cells; ++i) {
    pts[i] = lo + (i + 0.5) * h;
    lm[i] = -n * V(map.to_x(pts[i])) + std::log(h);
  }
  return build(n, std::move(pts), lm);
}

GridDensity build_grid_density(const DiscreteEnsemble& ens, const ScaledLattice& lattice,
                               double lo, double hi) {
  std::vector<double> pts, lm;
  for (int j = 0; j < ens.N; ++j)
    if (lattice.sites[j] >= lo && lattice.sites[j] <= hi) {
      pts.push_back(lattice.sites[j]);
      lm.push_back(ens.log_weight[j]);
    }
  if (static_cast<int>(pts.size()) != ens.N)
    throw ParameterError("build_grid_density: the window must hold every lattice site");
  return build(ens.n, std::move(pts), lm);
}

std::vector<Configuration> sample(const GridDensity& g, std::int64_t count, std::uint64_t seed) {
  if (count < 1) throw ParameterError("sample: count must be >= 1");
  const Eigen::Index m = static_cast<Eigen::Index>(g.size());
  std::vector<Configuration> out(static_cast<std::size_t>(count));
  omp::for_each_replica(count, [&](std::int64_t r) {
    CounterRng rng(seed, static_cast<std::uint64_t>(r));
    Configuration c;
    c.n = g.n;
    c.idx[0] = draw(g.p1_cdf.data(), m, rng.uniform());
    if (g.n >= 2) c.idx[1] = draw(g.p2_cdf.col(c.idx[0]).data(), m, rng.uniform());
    if (g.n == 3) {
      std::vector<double> cdf(m);
      double run = 0.0;
      int idx[3] = {c.idx[0], c.idx[1], 0};
      for (Eigen::Index j = 0; j < m; ++j) {
        idx[2] = static_cast<int>(j);
        run += det_squared(g, idx);
        cdf[j] = run;
      }
      c.idx[2] = draw(cdf.data(), m, rng.uniform());
    }
    for (int k = 0; k < g.n; ++k) c.u[k] = g.points[c.idx[k]];
    out[static_cast<std::size_t>(r)] = c;
  });
  return out;
}

ConditionedSamples mark_and_condition(const std::vector<Configuration>& samples,
                                      const std::function<double(double)>& sigma,
                                      std::uint64_t seed) {
  ConditionedSamples out;
  const std::int64_t count = static_cast<std::int64_t>(samples.size());
  out.marked.resize(samples.size());
  omp::for_each_replica(count, [&](std::int64_t r) {
    CounterRng rng(seed ^ kMarkStreams, static_cast<std::uint64_t>(r));
    MarkedSample& s = out.marked[static_cast<std::size_t>(r)];
    s.config = samples[static_cast<std::size_t>(r)];
    s.accepted = true;
    for (int k = 0; k < s.config.n; ++k) {
      s.marks[k] = rng.uniform() < sigma(s.config.u[k]) ? 1 : 0;
      s.accepted = s.accepted && s.marks[k] == 0;
    }
  });
  std::int64_t early = 0;
  for (std::int64_t r = 0; r < count; ++r) {
    const MarkedSample& s = out.marked[static_cast<std::size_t>(r)];
    if (s.accepted) out.accepted.push_back(s.config);
    if (r + 1 == 10000) early = static_cast<std::int64_t>(out.accepted.size());
  }
  out.trials = count;
  if (count >= 10000 && early < 10)
    throw StatisticsError("mark_and_condition: acceptance below 1e-3 after 1e4 trials; use a "
                          "milder sigma");
  out.rate = count ? static_cast<double>(out.accepted.size()) / count : 0.0;
  out.rate_se = count ? std::sqrt(out.rate * (1.0 - out.rate) / count) : 0.0;
  return out;
}

McEstimate estimate_pgf(const std::vector<Configuration>& samples,
                        const std::function<double(double)>& h) {
  if (samples.size() < 100)
    throw StatisticsError("estimate_pgf: need at least 100 accepted samples, got " +
                          std::to_string(samples.size()));
  double sum = 0.0, sum2 = 0.0;
  for (const Configuration& c : samples) {
    double p = 1.0;
    for (int k = 0; k < c.n; ++k) p *= 1.0 - h(c.u[k]);
    sum += p;
    sum2 += p * p;
  }
  McEstimate e;
  e.count = static_cast<std::int64_t>(samples.size());
  e.mean = sum / e.count;
  const double var = std::max(0.0, (sum2 - e.count * e.mean * e.mean) / (e.count - 1));
  e.standard_error = std::sqrt(var / e.count);
  return e;
}

void dump_samples_csv(const std::string& path, const std::vector<MarkedSample>& samples) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << "replica,particle,position,mark\n";
  f.precision(17);
  for (std::size_t r = 0; r < samples.size(); ++r)
    for (int k = 0; k < samples[r].config.n; ++k)
      f << r << ',' << k << ',' << samples[r].config.u[k] << ',' << samples[r].marks[k] << '\n';
}

}  // namespace deform
