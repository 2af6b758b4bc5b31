#pragma once

#include <Eigen/Dense>
#include <vector>

#include "softopt/element.hpp"
#include "softopt/grid.hpp"
#include "softopt/linsolve.hpp"
#include "softopt/materials.hpp"

namespace softopt {

/// Per-element flow conductivity K(rho1) and drainage coefficient D_s*H_d(rho1)
/// with their derivatives.
struct FlowCoefficients {
  Eigen::VectorXd conductivity, d_conductivity;
  Eigen::VectorXd drainage, d_drainage;
};

FlowCoefficients flow_coefficients(const Eigen::VectorXd& rho1, const FlowParams& params);

/// Element flow matrix: K * laplacian + drain * diag(lumped mass).
Eigen::MatrixXd element_flow_matrix(const ElementMatrices& em, double conductivity, double drainage);

/// Global flow matrix without boundary conditions.
SparseMatrix assemble_flow_matrix(const AssemblyPattern& pattern, const ElementMatrices& em,
                                  const FlowCoefficients& coeffs);

struct FlowSystem {
  SparseMatrix A;            // unconstrained global flow matrix
  std::vector<int> inlet;    // pressure dofs held at P_in
  std::vector<int> drain;    // pressure dofs held at p_atm
};

/// Assembles A for the given topology densities. Throws ErrorKind::config when
/// no inlet dofs are given or inlet and drain overlap.
FlowSystem assemble_flow(const Grid& grid, const Eigen::VectorXd& rho1, const FlowParams& params,
                         std::vector<int> inlet, std::vector<int> drain);

struct PressureField {
  Eigen::VectorXd p;
  double relative_residual = 0.0;

  double min() const { return p.minCoeff(); }
  double max() const { return p.maxCoeff(); }
};

/// True when p_atm - tol <= p <= P_in + tol with tol = 1e-6 (P_in - p_atm).
bool satisfies_maximum_principle(const Eigen::VectorXd& p, double P_in, double p_atm);

/// Dirichlet values: P_in on inlet, p_atm on drain.
Eigen::VectorXd pressure_boundary_values(int num_dofs, const std::vector<int>& inlet,
                                         const std::vector<int>& drain, double P_in, double p_atm);

PressureField solve_pressure(const FlowSystem& system, double P_in, double p_atm);

/// Geometry-only coupling T with F = -T p.
SparseMatrix coupling_matrix(const Grid& grid, const ElementMatrices& em);

/// Nodal forces F = -T p, assembled element by element.
Eigen::VectorXd pressure_to_force(const Grid& grid, const ElementMatrices& em, const Eigen::VectorXd& p);

/// Transpose action T^T v, used by the adjoint.
Eigen::VectorXd coupling_transpose(const Grid& grid, const ElementMatrices& em, const Eigen::VectorXd& v);

/// Power entering through the inlet: sum over inlet dofs of (A g)_i g_i, g = p - p_atm.
double energy_loss(const SparseMatrix& A, const std::vector<int>& inlet, const Eigen::VectorXd& p, double p_atm);
double energy_loss(const FlowSystem& system, const Eigen::VectorXd& p, double p_atm);

}  // namespace softopt
