#pragma once

#include <vector>

#include <Eigen/Dense>

#include "softopt/design.hpp"
#include "softopt/grid.hpp"

namespace softopt {

struct SealReport {
  bool sealed = true;
  std::vector<int> leak_path;   // element sequence inlet -> drain when leaking
  double added_fraction = 0.0;  // volume fraction added by a skin, when one was applied
};

struct SkinResult {
  PhysicalDesign design;
  std::vector<int> added;  // elements turned solid
  double added_fraction = 0.0;
};

/// Solidifies (with `material`) every element with rho1 < threshold whose
/// nodal pressures bracket the mid level p_atm + (P_in - p_atm)/2, using the
/// half-open test min < level <= max so a level hitting a node picks one side.
SkinResult heuristic_skin(const PhysicalDesign& design, const Grid& grid, const Eigen::VectorXd& p,
                          double P_in, double p_atm, int material = 1, double threshold = 0.5);

/// Marks `thickness` element layers along every domain face not listed in
/// `exempt_faces` (encoded 2*axis + side) as passive solid of `material`.
/// Throws ErrorKind::config for thickness < 1 or when no design element survives.
DomainMask non_design_skin(const DomainMask& mask, const Grid& grid, int thickness,
                           const std::vector<int>& exempt_faces, int material = 1);

/// Elements owning any of the faces, ascending and unique.
std::vector<int> adjacent_elements(const std::vector<Face>& faces);

/// Breadth-first search through face-adjacent elements with rho1 < threshold,
/// from inlet-adjacent void elements; leaking when a drain-adjacent element is reached.
SealReport check_sealed(const Eigen::VectorXd& rho1, const Grid& grid, const std::vector<Face>& inlet_faces,
                        const std::vector<Face>& drain_faces, double threshold = 0.5);

}  // namespace softopt
