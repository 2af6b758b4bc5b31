#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "softopt/closure.hpp"
#include "softopt/darcy.hpp"
#include "softopt/error.hpp"

using namespace softopt;
using Eigen::VectorXd;

namespace {

struct Channel {
  Grid grid;
  std::vector<Face> inlet, drain;
  std::vector<int> inlet_nodes, drain_nodes;
};

Channel channel(int nx, int ny) {
  Channel c{Grid({2, {nx, ny, 1}, 1.0}), {}, {}, {}, {}};
  BoundaryRegion in{"inlet", RegionRole::pressure_inlet, {{0, 0, 0}, {0, double(ny), 0}}};
  BoundaryRegion out{"drain", RegionRole::pressure_drain, {{double(nx), 0, 0}, {double(nx), double(ny), 0}}};
  const auto si = select_region(c.grid, in), so = select_region(c.grid, out);
  c.inlet = si.faces;
  c.drain = so.faces;
  c.inlet_nodes = si.nodes;
  c.drain_nodes = so.nodes;
  return c;
}

VectorXd linear_pressure(const Grid& g, double P_in) {
  VectorXd p(g.num_nodes());
  const double L = g.extent()[0];
  for (int n = 0; n < g.num_nodes(); ++n) p[n] = P_in * (1 - g.node_coord(n)[0] / L);
  return p;
}

}  // namespace

TEST_CASE("flood fill") {
  auto c = channel(10, 10);
  const int ne = c.grid.num_elements();
  VectorXd rho = VectorXd::Zero(ne);
  const auto open = check_sealed(rho, c.grid, c.inlet, c.drain);
  CHECK_FALSE(open.sealed);
  CHECK(open.leak_path.size() == 10);

  for (int j = 0; j < 10; ++j) rho[c.grid.element_index(5, j)] = 1.0;
  const auto wall = check_sealed(rho, c.grid, c.inlet, c.drain);
  CHECK(wall.sealed);
  CHECK(wall.leak_path.empty());

  const int hole = c.grid.element_index(5, 4);
  rho[hole] = 0.2;
  const auto pin = check_sealed(rho, c.grid, c.inlet, c.drain);
  CHECK_FALSE(pin.sealed);
  CHECK(std::find(pin.leak_path.begin(), pin.leak_path.end(), hole) != pin.leak_path.end());
  // consecutive path elements share a face
  for (size_t i = 1; i < pin.leak_path.size(); ++i) {
    bool adjacent = false;
    for (int f = 0; f < 4; ++f) adjacent |= c.grid.face_neighbor(pin.leak_path[i - 1], f) == pin.leak_path[i];
    CHECK(adjacent);
  }
  rho[hole] = 0.5;  // at the threshold counts as solid
  CHECK(check_sealed(rho, c.grid, c.inlet, c.drain).sealed);

  // corner contact does not leak
  VectorXd diag = VectorXd::Ones(4);
  auto c2 = channel(2, 2);
  diag[c2.grid.element_index(0, 0)] = 0.0;
  diag[c2.grid.element_index(1, 1)] = 0.0;
  CHECK(check_sealed(diag, c2.grid, c2.inlet, c2.drain).sealed);
}

TEST_CASE("raising densities never opens a leak") {
  auto c = channel(8, 8);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 63);
  int sealed_seen = 0;
  for (int t = 0; t < 200; ++t) {
    VectorXd rho(64);
    for (int e = 0; e < 64; ++e) rho[e] = u(rng) < 0.55 ? 1.0 : 0.0;
    if (!check_sealed(rho, c.grid, c.inlet, c.drain).sealed) continue;
    ++sealed_seen;
    VectorXd raised = rho;
    for (int k = 0; k < 5; ++k) {
      const int e = pick(rng);
      raised[e] = std::min(1.0, raised[e] + u(rng));
    }
    CHECK(check_sealed(raised, c.grid, c.inlet, c.drain).sealed);
  }
  CHECK(sealed_seen > 0);
}

TEST_CASE("heuristic skin on a straight channel") {
  auto c = channel(10, 1);
  const auto design = PhysicalDesign::uniform(10, 0, 0, 0);
  const auto r = heuristic_skin(design, c.grid, linear_pressure(c.grid, 5e4), 5e4, 0.0);
  REQUIRE(r.added.size() == 1);
  CHECK(r.added[0] == 5);  // nodes at 25 kPa and 20 kPa bracket the mid level
  CHECK(r.design.rho[0][5] == 1.0);
  CHECK(r.added_fraction == doctest::Approx(0.1));
  CHECK(check_sealed(r.design.rho[0], c.grid, c.inlet, c.drain).sealed);
}

TEST_CASE("heuristic skin leaves a sealed design alone") {
  auto c = channel(10, 1);
  VectorXd rho = VectorXd::Zero(10);
  rho[3] = 1.0;
  FlowParams fp;
  fp.D_s = 1e-6;
  const auto sys = assemble_flow(c.grid, rho, fp, c.inlet_nodes, c.drain_nodes);
  const auto p = solve_pressure(sys, 5e4, 0.0).p;
  auto design = PhysicalDesign::uniform(10, 0, 0.2, 0.2);
  design.rho[0] = rho;
  const auto r = heuristic_skin(design, c.grid, p, 5e4, 0.0);
  CHECK(r.added.empty());
  CHECK(r.design.rho[0] == design.rho[0]);
  CHECK(r.added_fraction == 0.0);
}

TEST_CASE("heuristic skin seals an open domain and is idempotent") {
  auto c = channel(10, 10);
  const int ne = c.grid.num_elements();
  FlowParams fp;
  fp.D_s = calibrate_drainage(fp.K_s, 1.0, 1.5, 0.01);
  const VectorXd rho = VectorXd::Zero(ne);
  const auto p = solve_pressure(assemble_flow(c.grid, rho, fp, c.inlet_nodes, c.drain_nodes), 5e4, 0.0).p;
  const auto design = PhysicalDesign::uniform(ne, 0, 0, 0);
  const auto once = heuristic_skin(design, c.grid, p, 5e4, 0.0, 2);
  CHECK(check_sealed(once.design.rho[0], c.grid, c.inlet, c.drain).sealed);
  // one element thick cut: one element per row
  CHECK(once.added.size() == 10);
  for (int e : once.added) {
    CHECK(once.design.rho[1][e] == 1.0);
    CHECK(once.design.rho[2][e] == 0.0);
  }
  const auto twice = heuristic_skin(once.design, c.grid, p, 5e4, 0.0, 2);
  CHECK(twice.added.empty());
  for (int k = 0; k < 3; ++k) CHECK(twice.design.rho[k] == once.design.rho[k]);

  // and with the pressure of a real drained solve on a random design
  Analysis an(testing::small_problem(12, 8));
  const auto d = testing::random_design(96, 4, 0.0, 1.0);
  const auto sol = an.solve(d);
  const auto s = heuristic_skin(d, an.grid(), sol.p, an.flow().P_in, an.flow().p_atm);
  CHECK(check_sealed(s.design.rho[0], an.grid(), an.inlet_faces(), an.drain_faces()).sealed);
}

TEST_CASE("non-design skin") {
  Grid g({3, {4, 4, 4}, 1.0});
  const auto mask = DomainMask::all_design(64);
  const auto shell = non_design_skin(mask, g, 1, {});
  CHECK(64 - shell.num_design() == 64 - 8);
  for (int e = 0; e < 64; ++e)
    if (shell.tag[e] == ElementTag::passive_solid) CHECK(shell.material[e] == 1);

  const auto open_x = non_design_skin(mask, g, 1, {0}, 2);
  int expect = 0;
  for (int e = 0; e < 64; ++e) {
    const auto ijk = g.element_ijk(e);
    const bool outer = ijk[0] == 3 || ijk[1] == 0 || ijk[1] == 3 || ijk[2] == 0 || ijk[2] == 3;
    expect += outer;
    CHECK((open_x.tag[e] == ElementTag::passive_solid) == outer);
  }
  CHECK(64 - open_x.num_design() == expect);

  CHECK_THROWS_AS(non_design_skin(mask, g, 0, {}), Error);
  CHECK_THROWS_AS(non_design_skin(mask, g, 2, {}), Error);

  // the skin closes passive holes on the boundary too
  auto holed = mask;
  holed.tag[0] = ElementTag::passive_void;
  holed.tag[21] = ElementTag::passive_void;
  const auto closed = non_design_skin(holed, g, 1, {});
  CHECK(closed.tag[0] == ElementTag::passive_solid);
  CHECK(closed.tag[21] == ElementTag::passive_void);
}

TEST_CASE("symmetry faces are exempt from the skin") {
  auto problem = testing::small_problem(8, 6);
  BoundaryRegion sym{"sym", RegionRole::symmetry, {{0, 0, 0}, {8e-3, 0, 0}}};
  sym.normal_axis = 1;
  problem.regions.push_back(sym);
  Grid g(problem.grid);
  const auto exempt = skin_exempt_faces(problem, g);
  CHECK(std::find(exempt.begin(), exempt.end(), 2) != exempt.end());  // y low
  CHECK(std::find(exempt.begin(), exempt.end(), 0) != exempt.end());  // inlet side
  const auto m = non_design_skin(DomainMask::all_design(48), g, 1, exempt);
  for (int i = 0; i < 7; ++i) CHECK(m.tag[g.element_index(i, 0)] == ElementTag::design);
  CHECK(m.tag[g.element_index(7, 0)] == ElementTag::passive_solid);
  CHECK(m.tag[g.element_index(3, 5)] == ElementTag::passive_solid);
}
