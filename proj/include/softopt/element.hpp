#pragma once

#include <Eigen/Dense>

namespace softopt {

/// Reference matrices for one square/cubic Q1 element of edge h, all
/// integrated with 2-point Gauss quadrature per axis. Local node ordering is
/// lexicographic (bit d of the local index = offset along axis d).
struct ElementMatrices {
  int dim = 2;
  double h = 1.0;
  double nu = 0.3;
  Eigen::MatrixXd laplacian;    // int grad(N)^T grad(N)
  Eigen::MatrixXd mass;         // int N^T N (consistent)
  Eigen::VectorXd lumped_mass;  // row sums of `mass`
  Eigen::MatrixXd stiffness;    // unit-modulus elastic stiffness (plane strain in 2-D)
  Eigen::MatrixXd coupling;     // T_e: int N_u^T grad(N_p), rows dim*a+c, cols b
};

ElementMatrices make_element_matrices(int dim, double h, double nu);

/// Isotropic elasticity matrix for unit modulus (Voigt, engineering shear).
Eigen::MatrixXd elasticity_matrix(int dim, double nu);

}  // namespace softopt
