#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "softopt/darcy.hpp"
#include "softopt/design.hpp"
#include "softopt/elasticity.hpp"
#include "softopt/element.hpp"
#include "softopt/grid.hpp"
#include "softopt/linsolve.hpp"
#include "softopt/problem.hpp"

namespace softopt {

struct FieldSolution {
  Eigen::VectorXd p;  // nodal pressure, Pa
  Eigen::VectorXd u;  // nodal displacement, m
  Eigen::VectorXd F;  // nodal force, N
  Eigen::VectorXd E;  // element modulus, Pa
  std::array<Eigen::VectorXd, 3> dE;  // dE/drho_bar_k per element
  FlowCoefficients flow;
  SparseMatrix A;  // flow matrix without boundary conditions
  SparseMatrix K;  // stiffness without springs
  PerformanceMetrics metrics;
  double k_out = 0.0;
  double p_min = 0.0, p_max = 0.0;
  bool max_principle = true;
  double flow_residual = 0.0, elastic_residual = 0.0;
};

/// Everything about a problem that does not change with the design: grid,
/// element matrices, sparsity patterns, boundary dofs and the factorisation
/// workspaces. solve() leaves the solvers factorised at that design, which the
/// adjoint relies on.
class Analysis {
 public:
  explicit Analysis(const ProblemSpec& problem);
  Analysis(const Analysis&) = delete;  // patterns point into grid_
  Analysis& operator=(const Analysis&) = delete;

  const ProblemSpec& problem() const { return problem_; }
  const Grid& grid() const { return grid_; }
  const DomainMask& mask() const { return mask_; }
  const ElementMatrices& element() const { return em_; }
  const FlowParams& flow() const { return flow_; }
  const OutputSpec& output() const { return output_; }
  const Eigen::VectorXd& output_vector() const { return l_; }
  const std::vector<int>& inlet_dofs() const { return inlet_; }
  const std::vector<int>& drain_dofs() const { return drain_; }
  const std::vector<Face>& inlet_faces() const { return inlet_faces_; }
  const std::vector<Face>& drain_faces() const { return drain_faces_; }
  const std::vector<int>& constrained_dofs() const { return constrained_; }

  FieldSolution solve(const PhysicalDesign& design, std::optional<double> k_out = std::nullopt);

  /// Solvers factorised by the last solve().
  const ConstrainedSolver& flow_solver() const { return flow_solver_; }
  const ConstrainedSolver& elastic_solver() const { return elastic_solver_; }

 private:
  ProblemSpec problem_;
  Grid grid_;
  DomainMask mask_;
  FlowParams flow_;
  ElementMatrices em_;
  AssemblyPattern flow_pattern_;
  AssemblyPattern elastic_pattern_;
  std::vector<Face> inlet_faces_, drain_faces_;  // filled while selecting inlet_/drain_
  std::vector<int> inlet_, drain_;
  std::vector<int> constrained_;
  OutputSpec output_;
  Eigen::VectorXd l_;
  ConstrainedSolver flow_solver_;
  ConstrainedSolver elastic_solver_;
};

}  // namespace softopt
