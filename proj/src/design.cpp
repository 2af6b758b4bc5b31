#include "softopt/design.hpp"

namespace softopt {

PhysicalDesign PhysicalDesign::uniform(int num_elements, double r1, double r2, double r3) {
  PhysicalDesign d;
  d.rho[0] = Eigen::VectorXd::Constant(num_elements, r1);
  d.rho[1] = Eigen::VectorXd::Constant(num_elements, r2);
  d.rho[2] = Eigen::VectorXd::Constant(num_elements, r3);
  return d;
}

void PhysicalDesign::set_element(int e, const std::array<double, 3>& values) {
  for (int c = 0; c < 3; ++c) rho[c][e] = values[c];
}

std::array<double, 3> material_pattern(int material) {
  if (material <= 0) return {0.0, 0.0, 0.0};
  return {1.0, material >= 2 ? 1.0 : 0.0, material >= 3 ? 1.0 : 0.0};
}

int dominant_material(double rho1, double rho2, double rho3, int material_count) {
  if (rho1 < 0.5) return 0;
  if (material_count < 2 || rho2 < 0.5) return 1;
  if (material_count < 3 || rho3 < 0.5) return 2;
  return 3;
}

}  // namespace softopt
