#include "softopt/element.hpp"

#include <array>
#include <cmath>

namespace softopt {

Eigen::MatrixXd elasticity_matrix(int dim, double nu) {
  const double c = 1.0 / ((1.0 + nu) * (1.0 - 2.0 * nu));
  if (dim == 2) {
    Eigen::MatrixXd d(3, 3);
    d << 1.0 - nu, nu, 0.0,
         nu, 1.0 - nu, 0.0,
         0.0, 0.0, 0.5 - nu;
    return c * d;
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d(i, j) = i == j ? 1.0 - nu : nu;
  for (int i = 3; i < 6; ++i) d(i, i) = 0.5 - nu;
  return c * d;
}

ElementMatrices make_element_matrices(int dim, double h, double nu) {
  ElementMatrices em;
  em.dim = dim;
  em.h = h;
  em.nu = nu;
  const int nn = 1 << dim;
  const int nstrain = dim == 2 ? 3 : 6;
  em.laplacian = Eigen::MatrixXd::Zero(nn, nn);
  em.mass = Eigen::MatrixXd::Zero(nn, nn);
  em.stiffness = Eigen::MatrixXd::Zero(dim * nn, dim * nn);
  em.coupling = Eigen::MatrixXd::Zero(dim * nn, nn);
  const Eigen::MatrixXd D = elasticity_matrix(dim, nu);

  const double g = 1.0 / std::sqrt(3.0);
  const double detj = std::pow(h / 2.0, dim);  // unit Gauss weights
  const int nq = nn;                           // 2^dim points
  for (int q = 0; q < nq; ++q) {
    std::array<double, 3> xi{};
    for (int d = 0; d < dim; ++d) xi[d] = ((q >> d) & 1) ? g : -g;

    Eigen::VectorXd N(nn);
    Eigen::MatrixXd dN(dim, nn);  // physical derivatives
    for (int a = 0; a < nn; ++a) {
      std::array<double, 3> f{};
      std::array<double, 3> df{};
      for (int d = 0; d < dim; ++d) {
        const double s = ((a >> d) & 1) ? 1.0 : -1.0;
        f[d] = 0.5 * (1.0 + s * xi[d]);
        df[d] = 0.5 * s;
      }
      double prod = 1.0;
      for (int d = 0; d < dim; ++d) prod *= f[d];
      N(a) = prod;
      for (int d = 0; d < dim; ++d) {
        double p = df[d] * (2.0 / h);
        for (int o = 0; o < dim; ++o)
          if (o != d) p *= f[o];
        dN(d, a) = p;
      }
    }

    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nstrain, dim * nn);
    for (int a = 0; a < nn; ++a) {
      const int c = dim * a;
      if (dim == 2) {
        B(0, c) = dN(0, a);
        B(1, c + 1) = dN(1, a);
        B(2, c) = dN(1, a);
        B(2, c + 1) = dN(0, a);
      } else {
        B(0, c) = dN(0, a);
        B(1, c + 1) = dN(1, a);
        B(2, c + 2) = dN(2, a);
        B(3, c) = dN(1, a);
        B(3, c + 1) = dN(0, a);
        B(4, c + 1) = dN(2, a);
        B(4, c + 2) = dN(1, a);
        B(5, c) = dN(2, a);
        B(5, c + 2) = dN(0, a);
      }
    }

    em.laplacian.noalias() += detj * dN.transpose() * dN;
    em.mass.noalias() += detj * N * N.transpose();
    em.stiffness.noalias() += detj * B.transpose() * D * B;
    for (int a = 0; a < nn; ++a)
      for (int c = 0; c < dim; ++c)
        for (int b = 0; b < nn; ++b) em.coupling(dim * a + c, b) += detj * N(a) * dN(c, b);
  }
  em.lumped_mass = em.mass.rowwise().sum();
  return em;
}

}  // namespace softopt
