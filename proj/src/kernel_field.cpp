#include "deform/kernel_field.hpp"

#include "deform/errors.hpp"
#include "deform/parallel_kernels.hpp"
#include "deform/special_functions.hpp"

namespace deform {

Eigen::MatrixXd KernelField::matrix(const std::vector<double>& nodes) const {
  if (finite_rank()) {
    const Eigen::MatrixXd l = left_features(nodes);
    if (!right_features) return omp::gram(l, l);
    return omp::gram(l, right_features(nodes));
  }
  if (batch) return batch(nodes);
  return omp::assemble(eval, nodes, std::vector<double>(nodes.size(), 1.0));
}

KernelField sine_kernel_field(double lo, double hi) {
  KernelField k;
  k.name = "sine";
  k.eval = [](double u, double v) { return sine_kernel(u, v); };
  k.measure = ReferenceMeasure::lebesgue(lo, hi);
  return k;
}

KernelField airy_kernel_field(double lo, double hi) {
  KernelField k;
  k.name = "airy";
  k.eval = [](double u, double v) { return airy_kernel(u, v); };
  k.measure = ReferenceMeasure::lebesgue(lo, hi);
  k.batch = [](const std::vector<double>& x) {
    const Eigen::Index m = static_cast<Eigen::Index>(x.size());
    std::vector<AiryValue> a(x.size());
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < m; ++i) a[i] = airy_ai(x[i]);
    Eigen::MatrixXd out(m, m);
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index i = 0; i < m; ++i) out(i, j) = airy_kernel(a[i], a[j]);
    return out;
  };
  return k;
}

KernelField discrete_sine_kernel_field(double beta, double kappa, double rho_star,
                                       std::vector<double> lattice) {
  discrete_sine_kernel(0.0, 0.0, beta, kappa, rho_star);  // validates parameters
  KernelField k;
  k.name = "discrete-sine";
  k.eval = [=](double u, double v) {
    return discrete_sine_kernel(u, v, beta, kappa, rho_star);
  };
  k.measure = ReferenceMeasure::counting(std::move(lattice));
  return k;
}

}  // namespace deform
