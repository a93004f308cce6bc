#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "deform/parallel_kernels.hpp"
#include "deform/special_functions.hpp"

namespace {

std::vector<double> grid(int m) {
  std::vector<double> x(m);
  for (int i = 0; i < m; ++i) x[i] = -8.0 + 16.0 * i / (m - 1);
  return x;
}

const deform::PairFunction kAiry = [](double u, double v) { return deform::airy_kernel(u, v); };
const deform::PairFunction kSine = [](double u, double v) { return deform::sine_kernel(u, v); };

template <class Assemble>
void assemble_bench(benchmark::State& st, Assemble f, const deform::PairFunction& k) {
  const auto x = grid(static_cast<int>(st.range(0)));
  const std::vector<double> s(x.size(), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(f(k, x, s));
}

void BM_SerialAssembleSine(benchmark::State& st) { assemble_bench(st, deform::serial::assemble, kSine); }
void BM_OmpAssembleSine(benchmark::State& st) { assemble_bench(st, deform::omp::assemble, kSine); }
void BM_SerialAssembleAiry(benchmark::State& st) { assemble_bench(st, deform::serial::assemble, kAiry); }
void BM_OmpAssembleAiry(benchmark::State& st) { assemble_bench(st, deform::omp::assemble, kAiry); }

void BM_SerialGram(benchmark::State& st) {
  const Eigen::MatrixXd f = Eigen::MatrixXd::Random(80, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(deform::serial::gram(f, f));
}
void BM_OmpGram(benchmark::State& st) {
  const Eigen::MatrixXd f = Eigen::MatrixXd::Random(80, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(deform::omp::gram(f, f));
}

void BM_SerialMap(benchmark::State& st) {
  const auto x = grid(static_cast<int>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(deform::serial::map([](double u) { return deform::airy_ai(u).ai; }, x));
}
void BM_OmpMap(benchmark::State& st) {
  const auto x = grid(static_cast<int>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(deform::omp::map([](double u) { return deform::airy_ai(u).ai; }, x));
}

}  // namespace

BENCHMARK(BM_SerialAssembleSine)->Arg(200)->Arg(800);
BENCHMARK(BM_OmpAssembleSine)->Arg(200)->Arg(800);
BENCHMARK(BM_SerialAssembleAiry)->Arg(100)->Arg(200);
BENCHMARK(BM_OmpAssembleAiry)->Arg(100)->Arg(200);
BENCHMARK(BM_SerialGram)->Arg(400)->Arg(1200);
BENCHMARK(BM_OmpGram)->Arg(400)->Arg(1200);
BENCHMARK(BM_SerialMap)->Arg(1000);
BENCHMARK(BM_OmpMap)->Arg(1000);

BENCHMARK_MAIN();
