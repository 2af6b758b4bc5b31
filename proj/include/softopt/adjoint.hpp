#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "softopt/analysis.hpp"
#include "softopt/design.hpp"
#include "softopt/elasticity.hpp"
#include "softopt/problem.hpp"

namespace softopt {

/// f and its partials with respect to u_out, SE and E_t.
struct ObjectiveParts {
  double f = 0.0;
  double d_uout = 0.0;
  double d_SE = 0.0;
  double d_Et = 0.0;
};

/// Throws ErrorKind::degenerate when SE <= 0, or E_t <= 0 for energy_penalty.
ObjectiveParts objective_parts(const PerformanceMetrics& m, const ObjectiveSpec& spec);
double objective_value(const PerformanceMetrics& m, const ObjectiveSpec& spec);

/// s giving |f| = spec.target_magnitude at m. When |u_out| is at roundoff level
/// relative to u_max (largest nodal displacement, e.g. a symmetric start) u_max
/// stands in for it. Throws degenerate when the structure does not move at all.
double calibrate_scale(const PerformanceMetrics& m, const ObjectiveSpec& spec, double u_max);

struct AdjointFields {
  Eigen::VectorXd lambda_u;  // displacement adjoint, zero on constrained dofs
  Eigen::VectorXd lambda_p;  // pressure adjoint, zero on inlet/drain dofs
  double residual_u = 0.0, residual_p = 0.0;
};

/// K' lambda_u = -df/du and A_ff lambda_p = -(df/dp + T^T lambda_u)_f, using
/// the factorisations left by analysis.solve() for `sol`.
AdjointFields solve_adjoints(const Analysis& analysis, const FieldSolution& sol, const ObjectiveParts& parts);

struct SensitivityBundle {
  std::array<Eigen::VectorXd, 3> df;  // df/drho_bar per channel
  std::array<Eigen::VectorXd, 3> dg;  // dg_k/drho_bar_k (constraint k only touches channel k)
};

struct VolumeConstraints {
  std::array<double, 3> g{0.0, 0.0, 0.0};
  std::array<Eigen::VectorXd, 3> grad;
  int count = 0;
};

/// g_1 = sum v rho1 / ((vf1+vf2+vf3) sum v) - 1, g_k = sum v rho_k / (vf_k sum v) - 1 for k > 1.
VolumeConstraints volume_constraints(const PhysicalDesign& design, const Grid& grid,
                                     const std::vector<double>& fractions);

/// Gradients with respect to the physical densities of every element.
SensitivityBundle total_gradient(const Analysis& analysis, const FieldSolution& sol, const AdjointFields& adj,
                                 const ObjectiveParts& parts, const VolumeConstraints& vc);

}  // namespace softopt
