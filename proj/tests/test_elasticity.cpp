#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "softopt/elasticity.hpp"
#include "softopt/error.hpp"

using namespace softopt;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Classic closed-form plane-stress Q1 matrix (counter-clockwise node order,
// unit modulus); plane strain follows from E' = E/(1-nu^2), nu' = nu/(1-nu).
MatrixXd textbook_plane_stress(double nu) {
  MatrixXd A11(4, 4), A12(4, 4), B11(4, 4), B12(4, 4);
  A11 << 12, 3, -6, -3, 3, 12, 3, 0, -6, 3, 12, -3, -3, 0, -3, 12;
  A12 << -6, -3, 0, 3, -3, -6, -3, -6, 0, -3, -6, 3, 3, -6, 3, -6;
  B11 << -4, 3, -2, 9, 3, -4, -9, 4, -2, -9, -4, -3, 9, 4, -3, -4;
  B12 << 2, -3, 4, -9, -3, 2, 9, -2, 4, 9, 2, 3, -9, -2, 3, 2;
  MatrixXd A(8, 8), B(8, 8);
  A << A11, A12, A12.transpose(), A11;
  B << B11, B12, B12.transpose(), B11;
  return (A + nu * B) / (24.0 * (1 - nu * nu));
}

std::vector<int> left_edge(const Grid& g) {
  std::vector<int> out;
  for (int j = 0; j < g.nodes_per_axis(1); ++j) out.push_back(g.node_index(0, j));
  return out;
}

}  // namespace

TEST_CASE("element stiffness matches the textbook matrix") {
  const double nu = 0.3;
  const auto em = make_element_matrices(2, 1.0, nu);
  const MatrixXd ref = textbook_plane_stress(nu / (1 - nu)) / (1 - nu * nu);
  // lexicographic local nodes 0,1,2,3 sit at counter-clockwise positions 0,1,3,2
  const int ccw[4] = {0, 1, 3, 2};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          CHECK(std::abs(em.stiffness(2 * a + i, 2 * b + j) - ref(2 * ccw[a] + i, 2 * ccw[b] + j)) <= 1e-14);
  CHECK(em.stiffness.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("rigid motions are in the null space") {
  for (int dim : {2, 3}) {
    Grid g({dim, {3, 2, 2}, 0.1});
    const SparseMatrix K = assemble_stiffness(g, VectorXd::Constant(g.num_elements(), 2e6), 0.3);
    VectorXd rot(g.num_displacement_dofs()), tr(g.num_displacement_dofs());
    for (int n = 0; n < g.num_nodes(); ++n) {
      const auto x = g.node_coord(n);
      rot[g.displacement_dof(n, 0)] = -x[1];
      rot[g.displacement_dof(n, 1)] = x[0];
      if (dim == 3) rot[g.displacement_dof(n, 2)] = 0.0;
      for (int c = 0; c < dim; ++c) tr[g.displacement_dof(n, c)] = c == 0 ? 1.0 : 0.0;
    }
    const double scale = 2e6 * rot.norm();
    CHECK((K * rot).norm() <= 1e-9 * scale);
    CHECK((K * tr).norm() <= 1e-9 * scale);
  }
}

TEST_CASE("output springs") {
  Grid g({2, {2, 2, 1}, 1.0});
  const SparseMatrix K = assemble_stiffness(g, VectorXd::Ones(g.num_elements()), 0.3);
  SparseMatrix K1 = K;
  add_output_springs(K1, g, {{4}, {0, 1, 0}, 7.0});
  const MatrixXd diff = MatrixXd(K1) - MatrixXd(K);
  CHECK(diff(g.displacement_dof(4, 1), g.displacement_dof(4, 1)) == doctest::Approx(7.0));
  CHECK(diff.cwiseAbs().sum() == doctest::Approx(7.0));

  SparseMatrix K0 = K;
  add_output_springs(K0, g, {{4, 5}, {1, 0, 0}, 0.0});
  CHECK((MatrixXd(K0) - MatrixXd(K)).cwiseAbs().maxCoeff() == 0.0);

  // two nodes share the spring equally
  SparseMatrix K2 = K;
  add_output_springs(K2, g, {{2, 5}, {1, 0, 0}, 8.0});
  const MatrixXd d2 = MatrixXd(K2) - MatrixXd(K);
  CHECK(d2(g.displacement_dof(2, 0), g.displacement_dof(2, 0)) == doctest::Approx(4.0));
  CHECK(d2(g.displacement_dof(5, 0), g.displacement_dof(5, 0)) == doctest::Approx(4.0));

  const VectorXd l = output_vector(g, {{2, 5}, {0, -1, 0}, 8.0});
  CHECK(l[g.displacement_dof(2, 1)] == doctest::Approx(-0.5));
  CHECK(l.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("spring against a floating element") {
  // A modulus-free element is held by its spring alone once the other
  // rigid-body dofs are fixed: u_out = f / k.
  Grid g({2, {1, 1, 1}, 1.0});
  SparseMatrix K = assemble_stiffness(g, VectorXd::Zero(1), 0.3);
  const OutputSpec out{{3}, {1, 0, 0}, 250.0};
  add_output_springs(K, g, out);
  std::vector<int> fixed;
  for (int d = 0; d < g.num_displacement_dofs(); ++d)
    if (d != g.displacement_dof(3, 0)) fixed.push_back(d);
  VectorXd F = VectorXd::Zero(8);
  F[g.displacement_dof(3, 0)] = 5.0;
  const auto sol = solve_displacement(K, F, fixed);
  CHECK(output_vector(g, out).dot(sol.u) == doctest::Approx(5.0 / 250.0).epsilon(1e-12));

  // and with the element present, a 1-dof stiffness plus the spring in series
  SparseMatrix Ks = assemble_stiffness(g, VectorXd::Constant(1, 1e3), 0.3);
  const double k_el = Ks.coeff(g.displacement_dof(3, 0), g.displacement_dof(3, 0));
  add_output_springs(Ks, g, out);
  const auto sol2 = solve_displacement(Ks, F, fixed);
  CHECK(sol2.u[g.displacement_dof(3, 0)] == doctest::Approx(5.0 / (k_el + 250.0)).epsilon(1e-12));
}

TEST_CASE("cantilever matches a dense solve") {
  const double h = 0.01;
  Grid g({2, {8, 4, 1}, h});
  const SparseMatrix K = assemble_stiffness(g, testing::random_design(g.num_elements(), 3, 0.5, 2.0).rho[0] * 1e6, 0.3);
  const auto fixed = constrained_displacement_dofs(g, left_edge(g), {});
  CHECK(fixed.size() == 10);
  VectorXd F = VectorXd::Zero(g.num_displacement_dofs());
  for (int j = 0; j <= 4; ++j) F[g.displacement_dof(g.node_index(8, j), 1)] = (j == 0 || j == 4) ? -0.5 : -1.0;
  const auto sol = solve_displacement(K, F, fixed);

  std::vector<int> free;
  for (int d = 0; d < g.num_displacement_dofs(); ++d)
    if (std::find(fixed.begin(), fixed.end(), d) == fixed.end()) free.push_back(d);
  const MatrixXd Kd(K);
  MatrixXd Kff(free.size(), free.size());
  VectorXd Ff(free.size());
  for (size_t a = 0; a < free.size(); ++a) {
    Ff[a] = F[free[a]];
    for (size_t b = 0; b < free.size(); ++b) Kff(a, b) = Kd(free[a], free[b]);
  }
  const VectorXd uf = Kff.ldlt().solve(Ff);
  const int tip = g.displacement_dof(g.node_index(8, 2), 1);
  const int tip_f = static_cast<int>(std::find(free.begin(), free.end(), tip) - free.begin());
  CHECK(std::abs(sol.u[tip] - uf[tip_f]) <= 1e-8 * std::abs(uf[tip_f]));
  CHECK(sol.u[tip] < 0.0);
  for (int d : fixed) CHECK(sol.u[d] == 0.0);

  CHECK(solve_displacement(K, VectorXd::Zero(F.size()), fixed).u.isZero(0.0));
}

TEST_CASE("reciprocity and strain energy") {
  Grid g({2, {6, 3, 1}, 0.01});
  const SparseMatrix K = assemble_stiffness(g, testing::random_design(g.num_elements(), 6, 0.1, 1.0).rho[0] * 1e6, 0.3);
  const auto fixed = constrained_displacement_dofs(g, left_edge(g), {});
  const VectorXd Fa = testing::random_design(g.num_displacement_dofs(), 1).rho[0];
  const VectorXd Fb = testing::random_design(g.num_displacement_dofs(), 2).rho[0];
  const VectorXd ua = solve_displacement(K, Fa, fixed).u, ub = solve_displacement(K, Fb, fixed).u;
  CHECK(std::abs(ua.dot(Fb) - ub.dot(Fa)) <= 1e-9 * std::abs(ua.dot(Fb)));

  // work of the loads on the free dofs equals the stored energy
  VectorXd Ff = Fa;
  for (int d : fixed) Ff[d] = 0.0;
  const auto m = metrics(g, ua, K, {{g.node_index(6, 1)}, {1, 0, 0}, 0.0});
  CHECK(std::abs(m.SE - 0.5 * Ff.dot(ua)) <= 1e-8 * m.SE);
  CHECK(m.W == 0.0);
}

TEST_CASE("metrics") {
  Grid g({2, {1, 1, 1}, 1.0});
  SparseMatrix K(8, 8);
  K.insert(0, 0) = 3.0;
  VectorXd u = VectorXd::Zero(8);
  const OutputSpec out{{0}, {1, 0, 0}, 3.0};
  const auto zero = metrics(g, u, K, out);
  CHECK(zero.u_out == 0.0);
  CHECK(zero.SE == 0.0);
  CHECK(zero.W == 0.0);
  u[0] = 2.0;
  const auto m = metrics(g, u, K, out);
  CHECK(m.u_out == 2.0);
  CHECK(m.SE == doctest::Approx(6.0));
  CHECK(m.W == doctest::Approx(6.0));
}

TEST_CASE("symmetry constrains only the normal component") {
  Grid g({3, {2, 2, 2}, 1.0});
  std::vector<int> plane;
  for (int n = 0; n < g.num_nodes(); ++n)
    if (g.node_ijk(n)[1] == 0) plane.push_back(n);
  const auto dofs = constrained_displacement_dofs(g, {}, {{plane, 1}});
  CHECK(dofs.size() == 9);
  for (int n : plane) CHECK(std::find(dofs.begin(), dofs.end(), g.displacement_dof(n, 1)) != dofs.end());
}

TEST_CASE("stiffer springs reduce the output displacement") {
  Analysis an(testing::small_problem(10, 6));
  const auto d = testing::random_design(60, 17, 0.3, 1.0);
  double last = 0.0;
  double sign = 0.0;
  for (double k : {0.1, 1.0, 10.0, 100.0, 1000.0, 1e4}) {
    const double u = an.solve(d, k).metrics.u_out;
    if (sign == 0.0) {
      sign = u > 0 ? 1.0 : -1.0;
      last = sign * u;
      continue;
    }
    CHECK(sign * u <= last * (1 + 1e-12));
    last = sign * u;
  }
}

TEST_CASE("missing supports are reported") {
  Grid g({2, {2, 2, 1}, 1.0});
  const SparseMatrix K = assemble_stiffness(g, VectorXd::Ones(4), 0.3);
  try {
    solve_displacement(K, VectorXd::Ones(g.num_displacement_dofs()), {0});
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    CHECK(std::string(e.what()).find("supports") != std::string::npos);
  }
}
