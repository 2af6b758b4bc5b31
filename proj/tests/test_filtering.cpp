#include <doctest.h>

#include <cmath>
#include <random>

#include "softopt/filtering.hpp"

using namespace softopt;
using Eigen::VectorXd;

namespace {

VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace

TEST_CASE("filter fixed points") {
  Grid g({2, {6, 5, 1}, 1.0});
  const auto nb = filter_neighborhoods(g, 1.5);
  const VectorXd c = VectorXd::Constant(g.num_elements(), 0.37);
  CHECK((filter_densities(c, nb) - c).cwiseAbs().maxCoeff() <= 1e-15);

  const auto id = filter_neighborhoods(g, 0.5);
  VectorXd spike = VectorXd::Zero(g.num_elements());
  spike[g.element_index(2, 2)] = 1.0;
  CHECK(filter_densities(spike, id) == spike);
}

TEST_CASE("checkerboard is smoothed") {
  Grid g({2, {5, 5, 1}, 1.0});
  const auto nb = filter_neighborhoods(g, 1.5);
  VectorXd cb(g.num_elements());
  for (int e = 0; e < g.num_elements(); ++e) {
    const auto ijk = g.element_ijk(e);
    cb[e] = (ijk[0] + ijk[1]) % 2;
  }
  const int mid = g.element_index(2, 2);  // value 0, 4 edge neighbours at 1
  const double w_self = 1.5, w_edge = 0.5, w_diag = 1.5 - std::sqrt(2.0);
  const double oracle = 4 * w_edge / (w_self + 4 * w_edge + 4 * w_diag);
  const double v = filter_densities(cb, nb)[mid];
  CHECK(v > 0.0);
  CHECK(v < 1.0);
  CHECK(v == doctest::Approx(oracle).epsilon(1e-13));
}

TEST_CASE("projection") {
  VectorXd x(3);
  x << 0.0, 0.5, 1.0;
  for (double beta : {1.0, 8.0, 16.0}) {
    const auto p = project(x, {beta, 0.5});
    CHECK(p.value[0] == 0.0);
    CHECK(p.value[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.value[2] == doctest::Approx(1.0).epsilon(1e-15));
  }
  const int n = 10001;
  const VectorXd scan = VectorXd::LinSpaced(n, 0.0, 1.0);
  const auto p1 = project(scan, {1.0, 0.5});
  const double dev = (p1.value - scan).cwiseAbs().maxCoeff();
  CHECK(dev < 0.12);
  CHECK(dev > 0.0);
  // [0,1] maps into [0,1]
  for (double beta : {2.0, 16.0}) {
    const auto pb = project(scan, {beta, 0.5});
    CHECK(pb.value.minCoeff() >= 0.0);
    CHECK(pb.value.maxCoeff() <= 1.0);
  }
}

TEST_CASE("chain_sensitivities is the exact adjoint of the linearisation") {
  Grid g({2, {7, 6, 1}, 1.0});
  const int n = g.num_elements();
  const auto nb = filter_neighborhoods(g, 2.2);
  const VectorXd rho = random_vector(n, 1);
  const ProjectionParams pp{6.0, 0.5};
  const auto pr = project(filter_densities(rho, nb), pp);

  const VectorXd a = random_vector(n, 2), b = random_vector(n, 3);
  const VectorXd Jb = pr.slope.cwiseProduct(filter_densities(b, nb));
  const VectorXd JTa = chain_sensitivities(a, pr.slope, nb);
  CHECK(std::abs(a.dot(Jb) - JTa.dot(b)) <= 1e-10 * std::abs(a.dot(Jb)));

  const VectorXd c = random_vector(n, 4);
  CHECK(std::abs(c.dot(filter_densities(b, nb)) - filter_transpose(c, nb).dot(b)) <= 1e-12 * n);

  CHECK(chain_sensitivities(VectorXd::Zero(n), pr.slope, nb).isZero(0.0));
}

TEST_CASE("jacobian-vector product matches finite differences") {
  Grid g({2, {6, 6, 1}, 1.0});
  const int n = g.num_elements();
  const auto nb = filter_neighborhoods(g, 1.5);
  const VectorXd rho = random_vector(n, 5), dir = random_vector(n, 6) - VectorXd::Constant(n, 0.5);
  const ProjectionParams pp{4.0, 0.5};
  const auto pr = project(filter_densities(rho, nb), pp);
  const VectorXd jvp = pr.slope.cwiseProduct(filter_densities(dir, nb));
  const double step = 1e-6;
  const VectorXd fd = (project(filter_densities(rho + step * dir, nb), pp).value -
                       project(filter_densities(rho - step * dir, nb), pp).value) / (2 * step);
  CHECK((fd - jvp).cwiseAbs().maxCoeff() <= 1e-5 * jvp.cwiseAbs().maxCoeff());
}

TEST_CASE("identity filter and gentle projection pass sensitivities through") {
  Grid g({2, {4, 4, 1}, 1.0});
  const int n = g.num_elements();
  const auto nb = filter_neighborhoods(g, 0.5);
  const VectorXd rho = VectorXd::Constant(n, 0.5);
  const auto pr = project(filter_densities(rho, nb), {1e-4, 0.5});
  const VectorXd up = random_vector(n, 9);
  CHECK((chain_sensitivities(up, pr.slope, nb) - up).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("grayness drops as beta grows") {
  Grid g({2, {10, 10, 1}, 1.0});
  const auto nb = filter_neighborhoods(g, 1.5);
  const VectorXd tilde = filter_densities(random_vector(g.num_elements(), 12), nb);
  double last = 2.0;
  for (double beta : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double gr = grayness(project(tilde, {beta, 0.5}).value);
    CHECK(gr < last);
    last = gr;
  }
  CHECK(grayness(VectorXd::Constant(4, 0.5)) == doctest::Approx(1.0));
  CHECK(grayness(VectorXd::Zero(4)) == 0.0);
}

TEST_CASE("beta continuation schedule") {
  ContinuationSchedule s;
  CHECK(s.beta_at(1) == 1.0);
  CHECK(s.beta_at(40) == 1.0);
  CHECK(s.beta_at(41) == 2.0);
  CHECK(s.beta_at(81) == 4.0);
  CHECK(s.beta_at(121) == 8.0);
  CHECK(s.beta_at(161) == 16.0);
  CHECK(s.beta_at(1000) == 16.0);
  CHECK(s.is_boundary(41));
  CHECK_FALSE(s.is_boundary(42));
  CHECK_FALSE(s.is_boundary(201));
}
