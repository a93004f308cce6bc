// deformlab: convergence sweeps for deformed determinantal ensembles.
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "deform/errors.hpp"
#include "deform/experiments.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string seed;
  std::string threads;
  std::string quad_order;
  std::vector<std::string> sets;
};

void print_table(const deform::ConvergenceReport& r) {
  for (std::size_t i = 0; i < r.columns.size(); ++i)
    std::printf("%s%16s", i ? " " : "", r.columns[i].c_str());
  std::printf("\n");
  const std::size_t limit = 40;
  for (std::size_t k = 0; k < r.rows.size() && k < limit; ++k) {
    for (std::size_t i = 0; i < r.rows[k].size(); ++i)
      std::printf("%s%16.9g", i ? " " : "", r.rows[k][i]);
    std::printf("\n");
  }
  if (r.rows.size() > limit) std::printf("... %zu rows in total\n", r.rows.size());
}

int run(const std::string& scenario, const Options& o) {
  try {
    deform::ExperimentConfig cfg =
        o.config.empty() ? deform::ExperimentConfig{} : deform::ExperimentConfig::load(o.config);
    cfg.set("scenario", scenario);
    for (const auto& kv : o.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw deform::ConfigError("--set expects key=value");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!o.seed.empty()) cfg.set("seed", o.seed);
    if (!o.threads.empty()) cfg.set("threads", o.threads);
    if (!o.quad_order.empty()) cfg.set("quad_order", o.quad_order);
    if (!o.out.empty()) cfg.set("out", o.out);

    const deform::ConvergenceReport report = deform::run_scenario(cfg);
    print_table(report);
    std::cout << report.metadata.dump(2) << "\n";
    if (!cfg.out.empty()) report.save(cfg.out);
    return deform::exit_code(report);
  } catch (const deform::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 4;
  } catch (const deform::ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 4;
  } catch (const deform::ConditioningError& e) {
    std::cerr << "assumption diagnostic failed: " << e.what() << "\n";
    return 2;
  } catch (const deform::AssumptionError& e) {
    std::cerr << "assumption diagnostic failed: " << e.what() << "\n";
    return 2;
  } catch (const deform::StatisticsError& e) {
    std::cerr << "statistics: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convergence sweeps for deformed determinantal point processes"};
  app.require_subcommand(1);
  Options o;
  int code = 0;
  const std::pair<const char*, const char*> commands[] = {
      {"bulk-sine", "bulk sweep against the deformed sine process"},
      {"edge-airy", "soft-edge sweep against the deformed Airy process"},
      {"discrete-sine", "lattice sweep against the deformed discrete sine process"},
      {"mc-verify", "Monte Carlo marking/conditioning against determinants"},
      {"gap", "gap probabilities with Fredholm series diagnostics"},
      {"equilibrium", "equilibrium measure of the log energy"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config, "key = value config file");
    sub->add_option("--out", o.out, "CSV report path");
    sub->add_option("--seed", o.seed, "RNG seed (u64)");
    sub->add_option("--threads", o.threads, "OpenMP threads");
    sub->add_option("--quad-order", o.quad_order, "Gauss-Legendre nodes per panel");
    sub->add_option("--set", o.sets, "extra key=value config entries");
    const std::string scenario = name;
    sub->callback([&, scenario] { code = run(scenario, o); });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 4;
  }
  return code;
}
