#include "softopt/adjoint.hpp"

#include <cmath>

#include "softopt/error.hpp"

namespace softopt {

ObjectiveParts objective_parts(const PerformanceMetrics& m, const ObjectiveSpec& spec) {
  if (!(m.SE > 0.0)) fail(ErrorKind::degenerate, "strain energy is zero: the load does not reach the structure");
  const bool penalty = spec.variant == ObjectiveVariant::energy_penalty;
  if (penalty && !(m.E_t > 0.0)) fail(ErrorKind::degenerate, "energy loss is zero: energy_penalty objective undefined");
  ObjectiveParts o;
  double base = -spec.scale * std::pow(m.SE, -1.0 / spec.n);
  if (penalty) base /= m.E_t;
  o.f = base * m.u_out;
  o.d_uout = base;
  o.d_SE = -o.f / (spec.n * m.SE);
  if (penalty) o.d_Et = -o.f / m.E_t;
  return o;
}

double objective_value(const PerformanceMetrics& m, const ObjectiveSpec& spec) {
  return objective_parts(m, spec).f;
}

double calibrate_scale(const PerformanceMetrics& m, const ObjectiveSpec& spec, double u_max) {
  ObjectiveSpec unit = spec;
  unit.scale = 1.0;
  PerformanceMetrics ref = m;
  if (std::abs(ref.u_out) < 1e-6 * u_max) ref.u_out = u_max;
  const double f = objective_value(ref, unit);
  if (!(std::abs(f) > 0.0) || !std::isfinite(f))
    fail(ErrorKind::degenerate, "initial design does not deform: cannot scale the objective");
  return spec.target_magnitude / std::abs(f);
}

AdjointFields solve_adjoints(const Analysis& analysis, const FieldSolution& sol, const ObjectiveParts& parts) {
  const auto& grid = analysis.grid();
  const auto& flow = analysis.flow();
  AdjointFields adj;

  const Eigen::VectorXd dfdu = parts.d_uout * analysis.output_vector() + parts.d_SE * (sol.K * sol.u);
  const auto& es = analysis.elastic_solver();
  SolveReport rep;
  adj.lambda_u = es.scatter(es.solve(-es.gather(dfdu), &rep), Eigen::VectorXd::Zero(grid.num_displacement_dofs()));
  adj.residual_u = rep.relative_residual;

  // F = -T g, so the pressure sees T^T lambda_u; E_t = dP * 1_I^T A g adds its own term.
  Eigen::VectorXd rhs = coupling_transpose(grid, analysis.element(), adj.lambda_u);
  if (parts.d_Et != 0.0) {
    Eigen::VectorXd ones_inlet = Eigen::VectorXd::Zero(grid.num_pressure_dofs());
    for (int d : analysis.inlet_dofs()) ones_inlet[d] = 1.0;
    rhs += parts.d_Et * (flow.P_in - flow.p_atm) * (sol.A * ones_inlet);
  }
  const auto& fs = analysis.flow_solver();
  adj.lambda_p = fs.scatter(fs.solve(-fs.gather(rhs), &rep), Eigen::VectorXd::Zero(grid.num_pressure_dofs()));
  adj.residual_p = rep.relative_residual;
  return adj;
}

VolumeConstraints volume_constraints(const PhysicalDesign& design, const Grid& grid,
                                     const std::vector<double>& fractions) {
  VolumeConstraints vc;
  vc.count = static_cast<int>(fractions.size());
  const int ne = grid.num_elements();
  const double v = grid.element_volume();
  const double total = v * ne;
  double all = 0.0;
  for (double f : fractions) all += f;
  for (int k = 0; k < 3; ++k) {
    vc.grad[k] = Eigen::VectorXd::Zero(ne);
    if (k >= vc.count) continue;
    const double limit = k == 0 ? all : fractions[k];
    if (!(limit > 0.0)) fail(ErrorKind::config, "volume fraction for channel " + std::to_string(k + 1) + " must be positive");
    vc.g[k] = v * design.rho[k].sum() / (limit * total) - 1.0;
    vc.grad[k].setConstant(v / (limit * total));
  }
  return vc;
}

SensitivityBundle total_gradient(const Analysis& analysis, const FieldSolution& sol, const AdjointFields& adj,
                                 const ObjectiveParts& parts, const VolumeConstraints& vc) {
  const auto& grid = analysis.grid();
  const auto& em = analysis.element();
  const auto& flow = analysis.flow();
  const int ne = grid.num_elements();
  const int dim = grid.dim();
  const int nn = grid.nodes_per_element();

  // mu carries the explicit E_t dependence on A at the inlet rows.
  Eigen::VectorXd mu = adj.lambda_p;
  const double dP = flow.P_in - flow.p_atm;
  if (parts.d_Et != 0.0)
    for (int d : analysis.inlet_dofs()) mu[d] += parts.d_Et * dP;

  SensitivityBundle s;
  for (int k = 0; k < 3; ++k) s.df[k] = Eigen::VectorXd::Zero(ne);
  s.dg = vc.grad;

  Eigen::VectorXd ue(dim * nn), we(dim * nn), ge(nn), me(nn);
  for (int e = 0; e < ne; ++e) {
    const auto nodes = grid.element_nodes(e);
    for (int a = 0; a < nn; ++a) {
      for (int c = 0; c < dim; ++c) {
        const int d = grid.displacement_dof(nodes[a], c);
        ue[dim * a + c] = sol.u[d];
        we[dim * a + c] = adj.lambda_u[d] + 0.5 * parts.d_SE * sol.u[d];
      }
      const int pd = grid.pressure_dof(nodes[a]);
      ge[a] = sol.p[pd] - flow.p_atm;
      me[a] = mu[pd];
    }
    const double kterm = we.dot(em.stiffness * ue);
    for (int k = 0; k < 3; ++k) s.df[k][e] += kterm * sol.dE[k][e];
    const double lap = me.dot(em.laplacian * ge);
    const double drain = (me.array() * em.lumped_mass.array() * ge.array()).sum();
    s.df[0][e] += sol.flow.d_conductivity[e] * lap + sol.flow.d_drainage[e] * drain;
  }
  return s;
}

}  // namespace softopt
