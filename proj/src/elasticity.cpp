#include "softopt/elasticity.hpp"

#include "softopt/error.hpp"

namespace softopt {

SparseMatrix assemble_stiffness(const AssemblyPattern& pattern, const ElementMatrices& em,
                                std::span<const double> E) {
  SparseMatrix K = pattern.zero_matrix();
  pattern.add_elements(K, E, em.stiffness);
  return K;
}

SparseMatrix assemble_stiffness(const Grid& grid, const Eigen::VectorXd& E, double nu) {
  if (E.size() != grid.num_elements()) fail(ErrorKind::dimension, "modulus field size mismatch");
  const AssemblyPattern pattern(grid, grid.dim());
  const auto em = make_element_matrices(grid.dim(), grid.h(), nu);
  return assemble_stiffness(pattern, em, std::span<const double>(E.data(), E.size()));
}

void add_output_springs(SparseMatrix& K, const Grid& grid, const OutputSpec& output) {
  if (output.k_out == 0.0 || output.nodes.empty()) return;
  const double k = output.k_out / static_cast<double>(output.nodes.size());
  const int dim = grid.dim();
  for (int n : output.nodes)
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        const double v = k * output.direction[a] * output.direction[b];
        if (v != 0.0) K.coeffRef(grid.displacement_dof(n, a), grid.displacement_dof(n, b)) += v;
      }
}

Eigen::VectorXd output_vector(const Grid& grid, const OutputSpec& output) {
  Eigen::VectorXd l = Eigen::VectorXd::Zero(grid.num_displacement_dofs());
  if (output.nodes.empty()) return l;
  const double w = 1.0 / static_cast<double>(output.nodes.size());
  for (int n : output.nodes)
    for (int c = 0; c < grid.dim(); ++c) l[grid.displacement_dof(n, c)] += w * output.direction[c];
  return l;
}

std::vector<int> constrained_displacement_dofs(const Grid& grid, const std::vector<int>& fixed_nodes,
                                               const std::vector<std::pair<std::vector<int>, int>>& symmetry) {
  std::vector<int> dofs;
  for (int n : fixed_nodes)
    for (int c = 0; c < grid.dim(); ++c) dofs.push_back(grid.displacement_dof(n, c));
  for (const auto& [nodes, axis] : symmetry) {
    if (axis < 0 || axis >= grid.dim()) fail(ErrorKind::config, "symmetry plane normal axis out of range");
    for (int n : nodes) dofs.push_back(grid.displacement_dof(n, axis));
  }
  return dofs;
}

DisplacementField solve_displacement(const SparseMatrix& K_with_springs, const Eigen::VectorXd& F,
                                     const std::vector<int>& constrained) {
  if (F.size() != K_with_springs.rows()) fail(ErrorKind::dimension, "force vector size mismatch");
  ConstrainedSolver solver(K_with_springs, constrained);
  try {
    solver.factorize(K_with_springs);
  } catch (const Error& err) {
    fail(ErrorKind::config, std::string("stiffness matrix is singular: insufficient supports (") + err.what() + ")");
  }
  SolveReport rep;
  const Eigen::VectorXd uf = solver.solve(solver.gather(F), &rep);
  return {solver.scatter(uf, Eigen::VectorXd::Zero(F.size())), rep.relative_residual};
}

PerformanceMetrics metrics(const Grid& grid, const Eigen::VectorXd& u, const SparseMatrix& K,
                           const OutputSpec& output) {
  PerformanceMetrics m;
  m.u_out = output_vector(grid, output).dot(u);
  m.SE = 0.5 * u.dot(K * u);
  m.W = 0.5 * output.k_out * m.u_out * m.u_out;
  return m;
}

}  // namespace softopt
