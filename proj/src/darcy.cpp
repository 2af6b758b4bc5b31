#include "softopt/darcy.hpp"

#include <algorithm>
#include <cmath>

#include "softopt/error.hpp"

namespace softopt {

FlowCoefficients flow_coefficients(const Eigen::VectorXd& rho1, const FlowParams& params) {
  const Eigen::Index n = rho1.size();
  FlowCoefficients c{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = flow_coefficient(rho1[i], params);
    c.conductivity[i] = k.value;
    c.d_conductivity[i] = k.grad;
    const auto h = smoothed_heaviside(rho1[i], params.beta_d, params.eta_d);
    c.drainage[i] = params.D_s * h.value;
    c.d_drainage[i] = params.D_s * h.grad;
  }
  return c;
}

Eigen::MatrixXd element_flow_matrix(const ElementMatrices& em, double conductivity, double drainage) {
  Eigen::MatrixXd m = conductivity * em.laplacian;
  m.diagonal() += drainage * em.lumped_mass;
  return m;
}

SparseMatrix assemble_flow_matrix(const AssemblyPattern& pattern, const ElementMatrices& em,
                                  const FlowCoefficients& coeffs) {
  SparseMatrix A = pattern.zero_matrix();
  const Eigen::MatrixXd mass = em.lumped_mass.asDiagonal();
  for (Eigen::Index e = 0; e < coeffs.conductivity.size(); ++e) {
    pattern.add_element(A, static_cast<int>(e), coeffs.conductivity[e], em.laplacian);
    if (coeffs.drainage[e] != 0.0) pattern.add_element(A, static_cast<int>(e), coeffs.drainage[e], mass);
  }
  return A;
}

FlowSystem assemble_flow(const Grid& grid, const Eigen::VectorXd& rho1, const FlowParams& params,
                         std::vector<int> inlet, std::vector<int> drain) {
  if (rho1.size() != grid.num_elements()) fail(ErrorKind::dimension, "rho1 size does not match element count");
  if (inlet.empty()) fail(ErrorKind::config, "flow system has no pressure_inlet dofs: pressure problem is singular");
  std::sort(inlet.begin(), inlet.end());
  std::sort(drain.begin(), drain.end());
  std::vector<int> both;
  std::set_intersection(inlet.begin(), inlet.end(), drain.begin(), drain.end(), std::back_inserter(both));
  if (!both.empty()) fail(ErrorKind::config, "pressure_inlet and pressure_drain regions overlap");
  const auto em = make_element_matrices(grid.dim(), grid.h(), 0.3);
  const AssemblyPattern pattern(grid, 1);
  return {assemble_flow_matrix(pattern, em, flow_coefficients(rho1, params)), std::move(inlet), std::move(drain)};
}

bool satisfies_maximum_principle(const Eigen::VectorXd& p, double P_in, double p_atm) {
  const double tol = 1e-6 * (P_in - p_atm);
  return p.minCoeff() >= p_atm - tol && p.maxCoeff() <= P_in + tol;
}

Eigen::VectorXd pressure_boundary_values(int num_dofs, const std::vector<int>& inlet,
                                         const std::vector<int>& drain, double P_in, double p_atm) {
  Eigen::VectorXd fill = Eigen::VectorXd::Zero(num_dofs);
  for (int d : inlet) fill[d] = P_in;
  for (int d : drain) fill[d] = p_atm;
  return fill;
}

PressureField solve_pressure(const FlowSystem& system, double P_in, double p_atm) {
  std::vector<int> fixed = system.inlet;
  fixed.insert(fixed.end(), system.drain.begin(), system.drain.end());
  ConstrainedSolver solver(system.A, fixed);
  solver.factorize(system.A);
  // Drainage pulls towards p_atm, so the system is linear in gauge pressure.
  const Eigen::VectorXd bc = pressure_boundary_values(static_cast<int>(system.A.rows()), system.inlet,
                                                      system.drain, P_in - p_atm, 0.0);
  const Eigen::VectorXd rhs = -solver.gather(system.A * bc);
  SolveReport rep;
  const Eigen::VectorXd pf = solver.solve(rhs, &rep);
  Eigen::VectorXd p = solver.scatter(pf, bc);
  p.array() += p_atm;
  return {std::move(p), rep.relative_residual};
}

SparseMatrix coupling_matrix(const Grid& grid, const ElementMatrices& em) {
  const int dim = grid.dim();
  const int nn = grid.nodes_per_element();
  std::vector<Eigen::Triplet<double, int>> trip;
  trip.reserve(static_cast<std::size_t>(grid.num_elements()) * dim * nn * nn);
  for (int e = 0; e < grid.num_elements(); ++e) {
    auto nodes = grid.element_nodes(e);
    for (int b = 0; b < nn; ++b)
      for (int a = 0; a < nn; ++a)
        for (int c = 0; c < dim; ++c)
          trip.emplace_back(grid.displacement_dof(nodes[a], c), grid.pressure_dof(nodes[b]),
                            em.coupling(dim * a + c, b));
  }
  SparseMatrix T(grid.num_displacement_dofs(), grid.num_pressure_dofs());
  T.setFromTriplets(trip.begin(), trip.end());
  return T;
}

Eigen::VectorXd pressure_to_force(const Grid& grid, const ElementMatrices& em, const Eigen::VectorXd& p) {
  if (p.size() != grid.num_pressure_dofs()) fail(ErrorKind::dimension, "pressure vector size mismatch");
  const int dim = grid.dim();
  const int nn = grid.nodes_per_element();
  Eigen::VectorXd F = Eigen::VectorXd::Zero(grid.num_displacement_dofs());
  Eigen::VectorXd pe(nn);
  for (int e = 0; e < grid.num_elements(); ++e) {
    auto nodes = grid.element_nodes(e);
    for (int a = 0; a < nn; ++a) pe[a] = p[grid.pressure_dof(nodes[a])];
    const Eigen::VectorXd fe = -(em.coupling * pe);
    for (int a = 0; a < nn; ++a)
      for (int c = 0; c < dim; ++c) F[grid.displacement_dof(nodes[a], c)] += fe[dim * a + c];
  }
  return F;
}

Eigen::VectorXd coupling_transpose(const Grid& grid, const ElementMatrices& em, const Eigen::VectorXd& v) {
  const int dim = grid.dim();
  const int nn = grid.nodes_per_element();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.num_pressure_dofs());
  Eigen::VectorXd ve(dim * nn);
  for (int e = 0; e < grid.num_elements(); ++e) {
    auto nodes = grid.element_nodes(e);
    for (int a = 0; a < nn; ++a)
      for (int c = 0; c < dim; ++c) ve[dim * a + c] = v[grid.displacement_dof(nodes[a], c)];
    const Eigen::VectorXd te = em.coupling.transpose() * ve;
    for (int a = 0; a < nn; ++a) out[grid.pressure_dof(nodes[a])] += te[a];
  }
  return out;
}

double energy_loss(const SparseMatrix& A, const std::vector<int>& inlet, const Eigen::VectorXd& p, double p_atm) {
  const Eigen::VectorXd gauge = p.array() - p_atm;
  const Eigen::VectorXd r = A * gauge;
  double et = 0.0;
  for (int d : inlet) et += r[d] * gauge[d];
  return et;
}

double energy_loss(const FlowSystem& system, const Eigen::VectorXd& p, double p_atm) {
  return energy_loss(system.A, system.inlet, p, p_atm);
}

}  // namespace softopt
