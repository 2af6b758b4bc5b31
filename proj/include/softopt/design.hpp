#pragma once

#include <array>

#include <Eigen/Dense>

namespace softopt {

/// Physical (filtered, projected) densities: topology channel 0, material
/// selectors 1 and 2. Each vector holds one value per element.
struct PhysicalDesign {
  std::array<Eigen::VectorXd, 3> rho;

  static PhysicalDesign uniform(int num_elements, double r1, double r2, double r3);
  int num_elements() const { return static_cast<int>(rho[0].size()); }
  void set_element(int e, const std::array<double, 3>& values);
};

/// Channel corner values selecting a 1-based material (0 = void).
std::array<double, 3> material_pattern(int material);

/// 0 for void (rho1 < 0.5), otherwise the material the corner closest to the
/// element's densities selects.
int dominant_material(double rho1, double rho2, double rho3, int material_count);

}  // namespace softopt
