#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace deform {

using PairFunction = std::function<double(double, double)>;
using PointFunction = std::function<double(double)>;

/// Hot loops in two flavours. `serial` is the reference; `omp` must agree
/// with it bit for bit (each entry is computed independently, no reductions
/// whose order depends on the thread count).
namespace serial {

/// M_ij = s_i K(x_i, x_j) s_j.
Eigen::MatrixXd assemble(const PairFunction& k, const std::vector<double>& x,
                         const std::vector<double>& s);

/// F^T G for feature matrices with one column per node.
Eigen::MatrixXd gram(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g);

std::vector<double> map(const PointFunction& f, const std::vector<double>& x);

/// Calls body(r) for r in [0, count).
void for_each_replica(std::int64_t count,
                      const std::function<void(std::int64_t)>& body);

}  // namespace serial

namespace omp {

Eigen::MatrixXd assemble(const PairFunction& k, const std::vector<double>& x,
                         const std::vector<double>& s);
Eigen::MatrixXd gram(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g);
std::vector<double> map(const PointFunction& f, const std::vector<double>& x);
void for_each_replica(std::int64_t count,
                      const std::function<void(std::int64_t)>& body);

}  // namespace omp

/// Threads used by the omp flavour; 0 restores the runtime default.
void set_thread_count(int threads);
int thread_count();

}  // namespace deform
