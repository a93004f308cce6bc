#include <atomic>
#include <cmath>
#include <vector>

#include "deform/parallel_kernels.hpp"
#include "deform/special_functions.hpp"
#include "doctest.h"

using namespace deform;

namespace {

std::vector<double> grid(int m, double lo, double hi) {
  std::vector<double> x(m);
  for (int i = 0; i < m; ++i) x[i] = lo + (hi - lo) * i / (m - 1);
  return x;
}

bool identical(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace

TEST_CASE("omp kernels match the serial reference bit for bit") {
  const auto x = grid(157, -6.0, 3.0);
  std::vector<double> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = std::sqrt(0.01 + 0.001 * i);
  const PairFunction airy = [](double u, double v) { return airy_kernel(u, v); };
  const Eigen::MatrixXd f = Eigen::MatrixXd::Random(13, 301), g = Eigen::MatrixXd::Random(13, 301);
  const PointFunction ai = [](double u) { return airy_ai(u).ai; };
  const Eigen::MatrixXd ref_a = serial::assemble(airy, x, s);
  const Eigen::MatrixXd ref_g = serial::gram(f, g);
  const std::vector<double> ref_m = serial::map(ai, x);
  for (int threads : {1, 2, 3, 8}) {
    set_thread_count(threads);
    CAPTURE(threads);
    CHECK(identical(omp::assemble(airy, x, s), ref_a));
    CHECK(identical(omp::gram(f, g), ref_g));
    CHECK(omp::map(ai, x) == ref_m);
  }
  set_thread_count(0);
  CHECK(thread_count() >= 1);
}

TEST_CASE("assemble applies the symmetric scaling") {
  const std::vector<double> x{0.0, 0.5}, s{2.0, 3.0};
  const Eigen::MatrixXd m = serial::assemble([](double u, double v) { return 1.0 + u + v; }, x, s);
  CHECK(m(0, 0) == 4.0);
  CHECK(m(0, 1) == 2.0 * 1.5 * 3.0);
  CHECK(m(1, 1) == 9.0 * 2.0);
}

TEST_CASE("replica loops visit every index once") {
  for (auto loop : {serial::for_each_replica, omp::for_each_replica}) {
    std::vector<std::atomic<int>> hits(1000);
    loop(1000, [&](std::int64_t r) { hits[r].fetch_add(1); });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
}
