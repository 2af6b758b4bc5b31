#include "softopt/analysis.hpp"

#include <algorithm>

#include "softopt/error.hpp"
#include "softopt/materials.hpp"

namespace softopt {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<int> region_nodes(const ProblemSpec& problem, const Grid& grid, RegionRole role,
                              std::vector<Face>* faces = nullptr) {
  std::vector<int> nodes;
  for (const auto* r : problem.regions_with(role)) {
    auto sel = select_region(grid, *r);
    nodes.insert(nodes.end(), sel.nodes.begin(), sel.nodes.end());
    if (faces) faces->insert(faces->end(), sel.faces.begin(), sel.faces.end());
  }
  return sorted_unique(std::move(nodes));
}

std::vector<int> elastic_constraints(const ProblemSpec& problem, const Grid& grid) {
  std::vector<std::pair<std::vector<int>, int>> symmetry;
  for (const auto* r : problem.regions_with(RegionRole::symmetry))
    symmetry.emplace_back(select_region(grid, *r).nodes, r->normal_axis);
  return sorted_unique(
      constrained_displacement_dofs(grid, region_nodes(problem, grid, RegionRole::fixed_support), symmetry));
}

std::vector<int> checked_drain(const std::vector<int>& inlet, std::vector<int> drain) {
  std::vector<int> both;
  std::set_intersection(inlet.begin(), inlet.end(), drain.begin(), drain.end(), std::back_inserter(both));
  if (!both.empty()) fail(ErrorKind::config, "pressure_inlet and pressure_drain regions overlap");
  return drain;
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

Analysis::Analysis(const ProblemSpec& problem)
    : problem_((problem.validate(), problem)),
      grid_(problem.grid),
      mask_(build_domain_mask(problem, grid_)),
      flow_(problem.resolved_flow()),
      em_(make_element_matrices(grid_.dim(), grid_.h(), problem.materials.nu)),
      flow_pattern_(grid_, 1),
      elastic_pattern_(grid_, grid_.dim()),
      inlet_(region_nodes(problem, grid_, RegionRole::pressure_inlet, &inlet_faces_)),
      drain_(checked_drain(inlet_, region_nodes(problem, grid_, RegionRole::pressure_drain, &drain_faces_))),
      constrained_(elastic_constraints(problem, grid_)),
      flow_solver_(flow_pattern_.zero_matrix(), concat(inlet_, drain_)),
      elastic_solver_(elastic_pattern_.zero_matrix(), constrained_) {
  const auto* out = problem.regions_with(RegionRole::output).front();
  output_.nodes = select_region(grid_, *out).nodes;
  output_.direction = out->direction;
  output_.k_out = out->k_out;
  l_ = softopt::output_vector(grid_, output_);
  if (constrained_.empty()) fail(ErrorKind::config, "no fixed_support or symmetry constraints selected");
}

FieldSolution Analysis::solve(const PhysicalDesign& design, std::optional<double> k_out) {
  const int ne = grid_.num_elements();
  if (design.num_elements() != ne) fail(ErrorKind::dimension, "design element count does not match the grid");
  FieldSolution s;
  s.k_out = k_out.value_or(output_.k_out);
  if (s.k_out < 0.0) fail(ErrorKind::config, "k_out must be >= 0");

  // pressure, solved in gauge
  s.flow = flow_coefficients(design.rho[0], flow_);
  s.A = assemble_flow_matrix(flow_pattern_, em_, s.flow);
  flow_solver_.factorize(s.A);
  const double dP = flow_.P_in - flow_.p_atm;
  const Eigen::VectorXd bc = pressure_boundary_values(grid_.num_pressure_dofs(), inlet_, drain_, dP, 0.0);
  SolveReport frep;
  const Eigen::VectorXd gf = flow_solver_.solve(-flow_solver_.gather(s.A * bc), &frep);
  const Eigen::VectorXd g = flow_solver_.scatter(gf, bc);
  s.flow_residual = frep.relative_residual;
  s.p = g.array() + flow_.p_atm;
  s.p_min = s.p.minCoeff();
  s.p_max = s.p.maxCoeff();
  s.max_principle = satisfies_maximum_principle(s.p, flow_.P_in, flow_.p_atm);

  // stiffness
  s.E.resize(ne);
  for (auto& v : s.dE) v = Eigen::VectorXd::Zero(ne);
  for (int e = 0; e < ne; ++e) {
    const auto m = interpolate_modulus(design.rho[0][e], design.rho[1][e], design.rho[2][e], problem_.materials);
    s.E[e] = m.value;
    for (int k = 0; k < 3; ++k) s.dE[k][e] = m.partial[k];
  }
  s.K = assemble_stiffness(elastic_pattern_, em_, std::span<const double>(s.E.data(), s.E.size()));
  SparseMatrix Ks = s.K;
  OutputSpec spring = output_;
  spring.k_out = s.k_out;
  add_output_springs(Ks, grid_, spring);
  try {
    elastic_solver_.factorize(Ks);
  } catch (const Error& err) {
    fail(ErrorKind::config, std::string("stiffness matrix is singular: insufficient supports (") + err.what() + ")");
  }

  s.F = pressure_to_force(grid_, em_, g);
  SolveReport erep;
  const Eigen::VectorXd uf = elastic_solver_.solve(elastic_solver_.gather(s.F), &erep);
  s.u = elastic_solver_.scatter(uf, Eigen::VectorXd::Zero(grid_.num_displacement_dofs()));
  s.elastic_residual = erep.relative_residual;

  s.metrics = metrics(grid_, s.u, s.K, spring);
  s.metrics.E_t = energy_loss(s.A, inlet_, s.p, flow_.p_atm);
  return s;
}

}  // namespace softopt
