#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "softopt/analysis.hpp"
#include "softopt/adjoint.hpp"
#include "softopt/problem.hpp"

namespace testing {

using softopt::Box;
using softopt::BoundaryRegion;
using softopt::RegionRole;

inline Box box2(double x0, double y0, double x1, double y1) { return Box{{x0, y0, 0}, {x1, y1, 0}}; }

inline BoundaryRegion region(const char* name, RegionRole role, Box b) {
  BoundaryRegion r;
  r.name = name;
  r.role = role;
  r.box = b;
  return r;
}

// Small cantilevered 2-D instance: clamp and inlet on the left edge, drains on
// top and right, output spring on the right edge.
inline softopt::ProblemSpec small_problem(int nx, int ny, bool drainage = true, double k_out = 50.0) {
  softopt::ProblemSpec p;
  p.name = "small";
  const double h = 1e-3;
  p.grid = {2, {nx, ny, 1}, h};
  const double L = nx * h, H = ny * h;
  p.regions.push_back(region("clamp", RegionRole::fixed_support, box2(0, 0, 0, H)));
  p.regions.push_back(region("inlet", RegionRole::pressure_inlet, box2(0, 0.375 * H, 0, 0.625 * H)));
  p.regions.push_back(region("drain_top", RegionRole::pressure_drain, box2(0, H, L, H)));
  p.regions.push_back(region("drain_tip", RegionRole::pressure_drain, box2(L, 0, L, H)));
  auto out = region("output", RegionRole::output, box2(L, 0.25 * H, L, 0.75 * H));
  out.direction = {0, -1, 0};
  out.k_out = k_out;
  p.regions.push_back(out);
  p.filter.r_min = 1.5 * h;
  if (!drainage) {
    p.drainage.automatic = false;
    p.flow.D_s = 0.0;
  }
  p.optimizer.max_iters = 10;
  return p;
}

inline softopt::PhysicalDesign random_design(int n, unsigned seed, double lo = 0.15, double hi = 0.85) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  softopt::PhysicalDesign d;
  for (auto& r : d.rho) {
    r.resize(n);
    for (int i = 0; i < n; ++i) r[i] = u(rng);
  }
  return d;
}

inline double rel_err(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace testing
