#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "softopt/optimizer.hpp"

using namespace softopt;
using Eigen::VectorXd;

TEST_CASE("initialisation levels") {
  auto problem = testing::small_problem(8, 6);
  Grid g(problem.grid);
  const auto mask = build_domain_mask(problem, g);
  const auto d = initialize(problem, g, mask);
  CHECK((d.rho[0].array() == 0.7).all());
  CHECK((d.rho[1].array() == 0.2).all());
  CHECK((d.rho[2].array() == 0.2).all());
  const auto g0 = constraint_values(d, g, problem.volume_fractions);
  for (double v : g0) CHECK(std::abs(v) <= 1e-14);

  problem.passive.push_back({{{0, 0, 0}, {2e-3, 2e-3, 0}}, ElementTag::passive_solid, 2});
  problem.passive.push_back({{{6e-3, 4e-3, 0}, {8e-3, 6e-3, 0}}, ElementTag::passive_void, 0});
  const auto mask2 = build_domain_mask(problem, g);
  const auto d2 = initialize(problem, g, mask2);
  const int solid = g.element_index(0, 0), hole = g.element_index(7, 5), free = g.element_index(4, 3);
  CHECK(mask2.tag[solid] == ElementTag::passive_solid);
  CHECK(d2.rho[0][solid] == 1.0);
  CHECK(d2.rho[1][solid] == 1.0);
  CHECK(d2.rho[2][solid] == 0.0);
  CHECK(mask2.tag[hole] == ElementTag::passive_void);
  CHECK(d2.rho[0][hole] == 0.0);
  CHECK(d2.rho[0][free] == 0.7);
}

TEST_CASE("constraint values") {
  Grid g({2, {5, 4, 1}, 1.0});
  const std::vector<double> vf{0.3, 0.2, 0.2};
  const auto zero = constraint_values(PhysicalDesign::uniform(20, 0, 0, 0), g, vf);
  for (double v : zero) CHECK(v == doctest::Approx(-1.0));
  const auto full = constraint_values(PhysicalDesign::uniform(20, 1, 0, 0), g, vf);
  CHECK(full[0] == doctest::Approx(1 / 0.7 - 1).epsilon(1e-14));
  CHECK(full[0] == doctest::Approx(0.4286).epsilon(1e-4));
}

TEST_CASE("design mapping chain rule") {
  auto problem = testing::small_problem(7, 5);
  problem.passive.push_back({{{0, 0, 0}, {1e-3, 5e-3, 0}}, ElementTag::passive_solid, 1});
  Grid g(problem.grid);
  const auto mask = build_domain_mask(problem, g);
  const DesignMapping map(g, mask, 3, problem.filter.r_min, 0.5);
  CHECK(map.num_design() == 30);
  const VectorXd x = design_vector(testing::random_design(35, 4, 0.0, 1.0), map);
  const double beta = 4.0;
  const auto fw = map.forward(x, beta);
  for (int e = 0; e < 5; ++e) CHECK(fw.design.rho[0][g.element_index(0, e)] == 1.0);
  CHECK(fw.design.rho[1] == map.forward_channel(x, 1, beta));

  std::array<VectorXd, 3> w;
  for (int k = 0; k < 3; ++k) w[k] = testing::random_design(35, 10 + k).rho[0];
  auto J = [&](const VectorXd& xv) {
    const auto f = map.forward(xv, beta);
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += w[k].dot(f.design.rho[k]);
    return s;
  };
  const VectorXd grad = map.backward(w, fw.slope);
  const double step = 1e-6;
  for (int j = 0; j < map.size(); j += 7) {
    VectorXd up = x, dn = x;
    up[j] += step;
    dn[j] -= step;
    CHECK(testing::rel_err(grad[j], (J(up) - J(dn)) / (2 * step)) <= 1e-6);
  }
}

TEST_CASE("zero iterations return the initialisation") {
  auto problem = testing::small_problem(8, 6);
  problem.optimizer.max_iters = 0;
  const auto r = run(problem);
  CHECK(r.status == RunStatus::max_iters);
  CHECK(r.history.empty());
  Grid g(problem.grid);
  const auto mask = build_domain_mask(problem, g);
  const DesignMapping map(g, mask, 3, problem.filter.r_min, 0.5);
  CHECK(r.x == design_vector(initialize(problem, g, mask), map));
  CHECK(r.fields.has_value());
}

TEST_CASE("steps respect the move limit and keep feasibility") {
  auto problem = testing::small_problem(10, 6);
  problem.optimizer.move = 0.1;
  Grid g(problem.grid);
  const auto mask = build_domain_mask(problem, g);
  const DesignMapping map(g, mask, 3, problem.filter.r_min, 0.5);
  VectorXd prev = design_vector(initialize(problem, g, mask), map);
  for (int k = 2; k <= 7; ++k) {
    problem.optimizer.max_iters = k;
    const auto r = run(problem);
    REQUIRE(r.status == RunStatus::max_iters);
    CHECK(static_cast<int>(r.history.size()) == k);
    CHECK((r.x - prev).cwiseAbs().maxCoeff() <= 0.1 + 1e-12);
    CHECK(r.x.minCoeff() >= 0.0);
    CHECK(r.x.maxCoeff() <= 1.0);
    for (double v : r.history.back().g) CHECK(v <= 1e-6);
    prev = r.x;
  }
}

TEST_CASE("history is reported through the callback") {
  auto problem = testing::small_problem(8, 6);
  problem.optimizer.max_iters = 4;
  std::vector<HistoryRow> seen;
  const auto r = run(problem, {[&](const HistoryRow& row) { seen.push_back(row); }});
  REQUIRE(seen.size() == 4);
  CHECK(r.scale > 0.0);
  CHECK(std::abs(seen[0].f) == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(seen[0].change == 0.0);
  for (size_t i = 0; i < seen.size(); ++i) {
    CHECK(seen[i].iter == static_cast<int>(i + 1));
    CHECK(seen[i].f == r.history[i].f);
    CHECK(seen[i].max_principle);
    CHECK(seen[i].beta == 1.0);
  }
  CHECK(seen.back().f < seen.front().f);
}

TEST_CASE("failures carry the stage") {
  auto problem = testing::small_problem(6, 4);
  // no supports: the first forward solve cannot succeed
  problem.regions.erase(problem.regions.begin());
  problem.optimizer.max_iters = 3;
  const auto r = run(problem);
  CHECK(r.status == RunStatus::failed);
  CHECK_FALSE(r.error.empty());
}
