#pragma once

#include <optional>
#include <string>
#include <vector>

#include "softopt/design.hpp"
#include "softopt/problem.hpp"

namespace softopt {

/// Built-in problems: finger2d, gripper2d, gripper3d, pneunet2d.
std::vector<std::string> fixture_names();
bool is_fixture(const std::string& name);
ProblemSpec fixture(const std::string& name);

/// Fixed designs shipped with a fixture (pneunet2d only).
bool has_fixture_design(const std::string& name);
PhysicalDesign fixture_design(const std::string& name);

}  // namespace softopt
