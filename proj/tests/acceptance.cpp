// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "deform/config.hpp"
#include "deform/discrete_gas.hpp"
#include "deform/equilibrium.hpp"
#include "deform/experiments.hpp"
#include "deform/fredholm.hpp"
#include "deform/orthopoly.hpp"
#include "deform/special_functions.hpp"
#include "deform/symbols.hpp"

using namespace deform;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ConvergenceReport run(const std::string& text) {
  ExperimentConfig c = ExperimentConfig::parse(text);
  return run_scenario(c);
}

bool strictly_decreasing(const std::vector<double>& e) {
  for (std::size_t i = 1; i < e.size(); ++i)
    if (!(e[i] < e[i - 1])) return false;
  return !e.empty();
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.3g", x);
  return s;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------

Outcome biorthogonality() {
  double worst_res = 0.0, worst_trace = 0.0, worst_time = 0.0;
  for (const Potential& V : {Potential::quadratic(), Potential::quartic()}) {
    const auto t0 = Clock::now();
    for (int n = 1; n <= 50; ++n) {
      const BiorthogonalSystem s = stieltjes_recurrence(V, n);
      const QuadratureRule fine = composite_gauss_legendre({s.support_lo, s.support_hi}, 31, 0.25);
      worst_res = std::max(worst_res, orthonormality_residual(s, fine));
      const double trace = fine.integrate([&](double x) { return cd_kernel(s, x, x); });
      worst_trace = std::max(worst_trace, std::abs(trace - n));
    }
    worst_time = std::max(worst_time, seconds_since(t0));
  }
  return {worst_res < 1e-8 && worst_trace < 1e-8 && worst_time < 10.0,
          "max residual " + fmt("%.2e", worst_res) + ", max |trace - n| " + fmt("%.2e", worst_trace) +
              ", slowest potential " + fmt("%.2f s", worst_time)};
}

struct KernelSource {
  std::string name;
  DiscretizedOperator op;
  bool edge = false;
};

std::vector<KernelSource> kernel_sources(bool finite_rank_only) {
  std::vector<KernelSource> out;
  if (!finite_rank_only) {
    out.push_back({"sine", discretize(sine_kernel_field(), -4.0, 4.0, 16), false});
    out.push_back({"airy", discretize(airy_kernel_field(), -4.0, 6.0, 16), true});
  }
  {
    const BiorthogonalSystem s = stieltjes_recurrence(Potential::quadratic(), 6);
    const double kappa = std::sqrt(2.0) / M_PI;
    const KernelField K = rescaled_bulk_kernel(s, 0.0, kappa);
    const double lo = (s.support_lo) * kappa * 6, hi = s.support_hi * kappa * 6;
    if (finite_rank_only)
      out.push_back({"hermite-cd(support)", discretize(K, lo, hi, 24, {}, 0.5), false});
    else
      out.push_back({"hermite-cd", discretize(K, -4.0, 4.0, 16), false});
  }
  {
    const NodeDensity rho = NodeDensity::uniform();
    const std::vector<double> x = quantized_nodes(rho, 48);
    const DiscreteEnsemble e =
        discrete_orthonormal(x, coulomb_log_weight(krawtchouk_potential(0.3), rho, nullptr, x), 24);
    const double kappa = krawtchouk_density(0.5, 0.3, 0.5);
    const KernelField K = scaled_discrete_kernel(e, rho, 0.5, kappa);
    const auto& sites = K.measure.counting_nodes().nodes;
    if (finite_rank_only)
      out.push_back({"lattice-cd(all sites)", discretize(K, sites.front() - 1, sites.back() + 1, 4), false});
    else
      out.push_back({"lattice-cd", discretize(K, -6.0, 6.0, 4), false});
  }
  return out;
}

std::vector<DeformationSymbol> symbol_families(bool edge) {
  return {DeformationSymbol::zero(),
          edge ? DeformationSymbol::indicator(1.0, INFINITY) : DeformationSymbol::indicator(-1.0, 1.0),
          edge ? DeformationSymbol::thinned(0.5, 0.0, INFINITY) : DeformationSymbol::thinned(0.5, -1.0, 1.0),
          DeformationSymbol::fermi(1.0, 0.0, !edge),
          DeformationSymbol::one_minus_exp([](double x) { return 0.5 * (4.0 - x * x); }, -2.0, 2.0, "0.5(4-x^2)")};
}

Outcome route_equality() {
  const auto t0 = Clock::now();
  const std::vector<TestFunction> hs = {TestFunction::bump(0.9, -1.0, 1.0), TestFunction::bump(0.5, 0.0, 3.0),
                                        TestFunction::soft_indicator(0.5, -0.5, 0.5, 0.2)};
  int triples = 0;
  double worst = 0.0;
  for (const KernelSource& k : kernel_sources(false))
    for (const DeformationSymbol& s : symbol_families(k.edge))
      for (const TestFunction& h : hs) {
        const std::vector<double> sv = k.op.sample(s), hv = k.op.sample(h);
        const double a = pgf_deformed(k.op, sv, hv, Route::Ratio).value;
        const double b = pgf_deformed(k.op, sv, hv, Route::DeformedKernel).value;
        worst = std::max(worst, std::abs(a - b));
        ++triples;
      }
  const double t = seconds_since(t0);
  return {triples >= 50 && worst < 1e-8 && t < 60.0,
          std::to_string(triples) + " triples (4 kernels x 5 families x 3 h), max |ratio - kernel| " +
              fmt("%.2e", worst) + ", " + fmt("%.2f s", t)};
}

Outcome projection() {
  double worst_proj = 0.0, worst_neutral = 0.0;
  for (const KernelSource& k : kernel_sources(true)) {
    for (const DeformationSymbol& s : symbol_families(false)) {
      const DiscretizedOperator d = deformed_kernel(k.op, k.op.sample(s));
      worst_proj = std::max(worst_proj, max_abs(d.A * d.A - d.A));
    }
    for (double c : {0.25, 0.5, 0.9}) {
      const DiscretizedOperator d = deformed_kernel(k.op, std::vector<double>(k.op.size(), c));
      worst_neutral = std::max(worst_neutral, max_abs(d.A - k.op.A));
    }
  }
  return {worst_proj < 1e-7 && worst_neutral < 1e-9,
          "max |(K^s)^2 - K^s| " + fmt("%.2e", worst_proj) + ", max |K^c - K| " + fmt("%.2e", worst_neutral)};
}

Outcome series() {
  const DiscretizedOperator op = discretize(sine_kernel_field(), -0.1, 0.1, 20);
  const std::vector<double> one(op.size(), 1.0);
  const SeriesResult s = fredholm_series(op, one, 4);
  const double det = fredholm_det(op, one);
  const double diff = std::abs(det - s.partial);
  return {diff < 1e-10 && diff <= s.tail_bound,
          "det " + fmt("%.15f", det) + ", |det - series| " + fmt("%.2e", diff) + ", tail bound " +
              fmt("%.2e", s.tail_bound)};
}

Outcome monte_carlo() {
  const auto t0 = Clock::now();
  const ConvergenceReport r = run(
      "scenario = mc-verify\npotential = quadratic\nn = 2\nreplicas = 100000\n"
      "symbol = thinned:0.5,-1,1\nh = indicator:0.5,-0.5,0.5,0.1\n");
  const double z = r.column_values("z")[0], zr = r.column_values("z_rate")[0];
  const double t = seconds_since(t0);
  return {std::abs(z) <= 3.0 && std::abs(zr) <= 3.0 && t < 120.0,
          "G det " + fmt("%.5f", r.column_values("limit")[0]) + " vs MC " + fmt("%.5f", r.column_values("value")[0]) +
              " (z " + fmt("%.2f", z) + "), acceptance z " + fmt("%.2f", zr) + ", " + fmt("%.1f s", t)};
}

Outcome bulk() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const char* sym : {"zero", "thinned:0.5,-1,1", "fermi:1,0"})
    for (const char* t : {"0", "1"}) {
      const ConvergenceReport r = run(std::string("scenario = bulk-sine\nn = 10,20,40,80\nh = bump:0.9,-1,1\n") +
                                      "symbol = " + sym + "\nt = " + t + "\n");
      const auto e = r.column_values("abs_error");
      const bool good = strictly_decreasing(e) && e.back() < 0.02;
      ok = ok && good;
      detail += std::string(detail.empty() ? "" : "; ") + sym + " t=" + t + ": " + join(e);
    }
  const double secs = seconds_since(t0);
  return {ok && secs < 300.0, detail + "; " + fmt("%.1f s", secs)};
}

Outcome edge() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const char* sym : {"indicator:1,inf", "thinned:0.5,0,inf", "fermi:1,0"}) {
    const ConvergenceReport r =
        run(std::string("scenario = edge-airy\nn = 16,32,64\nh = bump:0.9,-1,1\nsymbol = ") + sym + "\n");
    const auto e = r.column_values("abs_error");
    ok = ok && strictly_decreasing(e) && e.back() < 0.05;
    detail += std::string(detail.empty() ? "" : "; ") + sym + ": " + join(e);
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 300.0, detail + "; " + fmt("%.1f s", secs)};
}

Outcome discrete() {
  const auto t0 = Clock::now();
  const ConvergenceReport r = run(
      "scenario = discrete-sine\nweight = krawtchouk:0.3\nnode_density = uniform\nbeta = 0.5\n"
      "n = 64,128,256\nsymbol = one-minus-exp:0.5*(1-x^2/16),-4,4\nh = bump:0.5,-4,4\n");
  const auto ratios = r.column_values("error_ratio");
  bool envelope = true;
  for (std::size_t i = 1; i < ratios.size(); ++i) envelope = envelope && ratios[i] >= 1.4 && ratios[i] <= 2.8;
  const auto e = r.column_values("abs_error");
  const double secs = seconds_since(t0);
  return {envelope && strictly_decreasing(e) && secs < 300.0,
          "x* " + fmt("%.5f", r.metadata["x_star"].get<double>()) + ", kernel sup errors " +
              join(r.column_values("kernel_sup_error")) + " (ratios " +
              join({ratios.begin() + 1, ratios.end()}) + "), G errors " + join(e) + ", " + fmt("%.1f s", secs)};
}

Outcome equilibrium() {
  const auto t0 = Clock::now();
  const ConvergenceReport u = run("scenario = equilibrium\npotential = quadratic\ncells = 2000\n");
  const ConvergenceReport c = run("scenario = equilibrium\nconstrained = true\nweight = krawtchouk:0.3\ncells = 1000\n");
  const double sup = u.metadata["inner_sup_error"].get<double>();
  const double mass = std::abs(u.metadata["mass"].get<double>() - 1.0);
  const double excess = c.metadata["max_excess_over_cap"].get<double>();
  const double secs = seconds_since(t0);
  return {sup < 1e-2 && mass < 1e-6 && excess <= 1e-12 && secs < 60.0,
          "inner sup error " + fmt("%.2e", sup) + ", |mass - 1| " + fmt("%.2e", mass) + ", max excess over cap " +
              fmt("%.2e", excess) + ", " + fmt("%.1f s", secs)};
}

Outcome special_functions() {
  double overlap = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = 5.5 + i * 1e-3;
    const AiryValue s = airy_ai_series(x), a = airy_ai_asymptotic(x);
    overlap = std::max({overlap, std::abs(s.ai - a.ai) / std::abs(a.ai),
                        std::abs(s.ai_prime - a.ai_prime) / std::abs(a.ai_prime)});
  }
  // K(u, u + d) = K(u, u) - d Ai(u)^2 / 2 + O(d^2)
  double taylor = 0.0;
  for (double u = -8.0; u <= 8.0; u += 0.25) {
    const AiryValue a = airy_ai(u);
    for (double d : {1e-4, -1e-4, 1e-5})
      taylor = std::max(taylor, std::abs(airy_kernel(u, u + d) - (airy_kernel(u, u) - 0.5 * d * a.ai * a.ai)));
  }
  return {overlap < 1e-9 && taylor < 1e-7,
          "series/asymptotic max relative gap " + fmt("%.2e", overlap) + ", diagonal Taylor defect " +
              fmt("%.2e", taylor)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"biorthogonality and trace", biorthogonality},
      {"ratio and deformed-kernel routes agree", route_equality},
      {"deformed projections and constant-sigma neutrality", projection},
      {"Fredholm series against determinant", series},
      {"Monte Carlo marking/conditioning against determinants", monte_carlo},
      {"bulk sweep to the deformed sine limit", bulk},
      {"edge sweep to the deformed Airy limit", edge},
      {"discrete sweep to the deformed discrete sine limit", discrete},
      {"equilibrium solvers", equilibrium},
      {"Airy evaluators", special_functions},
  };
  int failures = 0, k = 0;
  for (const auto& [name, fn] : criteria) {
    ++k;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  [%2d] %s: %s\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", k - failures, k);
  return failures == 0 ? 0 : 1;
}
