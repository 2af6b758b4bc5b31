#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "softopt/element.hpp"
#include "softopt/grid.hpp"
#include "softopt/linsolve.hpp"

namespace softopt {

/// Output port: a spring of total stiffness k_out shared equally by the nodes,
/// acting along `direction` (unit vector).
struct OutputSpec {
  std::vector<int> nodes;
  std::array<double, 3> direction{0, 0, 0};
  double k_out = 0.0;
};

struct PerformanceMetrics {
  double u_out = 0.0;  // m, mean output-node displacement along the output direction
  double SE = 0.0;     // J, structure only (spring-free K)
  double W = 0.0;      // J, 0.5 k_out u_out^2
  double E_t = 0.0;    // flow energy loss, filled from the pressure solve
};

SparseMatrix assemble_stiffness(const AssemblyPattern& pattern, const ElementMatrices& em,
                                std::span<const double> E);
SparseMatrix assemble_stiffness(const Grid& grid, const Eigen::VectorXd& E, double nu);

/// Adds (k_out/n) d d^T to each output node's diagonal block.
void add_output_springs(SparseMatrix& K, const Grid& grid, const OutputSpec& output);

/// l with u_out = l^T u.
Eigen::VectorXd output_vector(const Grid& grid, const OutputSpec& output);

/// All components of `fixed_nodes` plus the normal component of each symmetry plane.
std::vector<int> constrained_displacement_dofs(const Grid& grid, const std::vector<int>& fixed_nodes,
                                               const std::vector<std::pair<std::vector<int>, int>>& symmetry);

struct DisplacementField {
  Eigen::VectorXd u;
  double relative_residual = 0.0;
};

/// Solves K' u = F with u = 0 on `constrained`. Throws ErrorKind::config
/// (naming insufficient supports) when the free block is singular.
DisplacementField solve_displacement(const SparseMatrix& K_with_springs, const Eigen::VectorXd& F,
                                     const std::vector<int>& constrained);

PerformanceMetrics metrics(const Grid& grid, const Eigen::VectorXd& u, const SparseMatrix& K,
                           const OutputSpec& output);

}  // namespace softopt
