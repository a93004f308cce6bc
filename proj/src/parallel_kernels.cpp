#include "deform/parallel_kernels.hpp"

#include <omp.h>

namespace deform {

namespace serial {

Eigen::MatrixXd assemble(const PairFunction& k, const std::vector<double>& x,
                         const std::vector<double>& s) {
  const Eigen::Index m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd out(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) out(i, j) = s[i] * k(x[i], x[j]) * s[j];
  return out;
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g) {
  const Eigen::Index m = f.cols();
  Eigen::MatrixXd out(m, g.cols());
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < m; ++i) out(i, j) = f.col(i).dot(g.col(j));
  return out;
}

std::vector<double> map(const PointFunction& f, const std::vector<double>& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  return out;
}

void for_each_replica(std::int64_t count,
                      const std::function<void(std::int64_t)>& body) {
  for (std::int64_t r = 0; r < count; ++r) body(r);
}

}  // namespace serial

namespace omp {

Eigen::MatrixXd assemble(const PairFunction& k, const std::vector<double>& x,
                         const std::vector<double>& s) {
  const Eigen::Index m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd out(m, m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) out(i, j) = s[i] * k(x[i], x[j]) * s[j];
  return out;
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g) {
  const Eigen::Index m = f.cols();
  Eigen::MatrixXd out(m, g.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < m; ++i) out(i, j) = f.col(i).dot(g.col(j));
  return out;
}

std::vector<double> map(const PointFunction& f, const std::vector<double>& x) {
  std::vector<double> out(x.size());
  const std::int64_t m = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < m; ++i) out[i] = f(x[i]);
  return out;
}

void for_each_replica(std::int64_t count,
                      const std::function<void(std::int64_t)>& body) {
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t r = 0; r < count; ++r) body(r);
}

}  // namespace omp

void set_thread_count(int threads) {
  if (threads > 0)
    omp_set_num_threads(threads);
  else
    omp_set_num_threads(omp_get_num_procs());
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace deform
