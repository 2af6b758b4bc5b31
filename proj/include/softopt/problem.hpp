#pragma once

#include <array>
#include <string>
#include <vector>

#include "softopt/filtering.hpp"
#include "softopt/grid.hpp"
#include "softopt/materials.hpp"

namespace softopt {

enum class ObjectiveVariant { baseline, energy_penalty };

/// f = -s u_out / SE^(1/n)            (baseline)
/// f = -s u_out / (E_t SE^(1/n))      (energy_penalty)
/// A non-positive `scale` means: choose s on the first iteration so that |f| = target_magnitude.
struct ObjectiveSpec {
  ObjectiveVariant variant = ObjectiveVariant::baseline;
  double n = 8.0;
  double scale = 0.0;
  double target_magnitude = 10.0;
};

enum class ClosureMode { none, heuristic, skin, energy_penalty };

const char* to_string(ObjectiveVariant v);
const char* to_string(ClosureMode m);
ClosureMode closure_mode_from_string(const std::string& s);

struct PassiveBlock {
  Box box;  // elements whose centroid lies inside
  ElementTag tag = ElementTag::passive_void;
  int material = 0;
};

struct FilterSettings {
  double r_min = 0.0;  // m
  double eta_p = 0.5;
  ContinuationSchedule beta;
};

struct OptSettings {
  int max_iters = 300;
  double move = 0.2;
  double tol = 0.01;          // on max change of the physical phase indicators
  double feasibility = 1e-6;  // required max g_k at convergence
};

struct ClosureSettings {
  ClosureMode mode = ClosureMode::none;
  int skin_thickness = 1;
  int skin_material = 1;
};

struct DrainageSettings {
  bool automatic = true;  // calibrate D_s from ratio/depth
  double ratio = 0.01;    // pressure fraction left after `depth` of solid
  double depth = 0.0;     // m; 0 means the filter radius
};

struct ProblemSpec {
  std::string name = "problem";
  GridSpec grid;
  std::vector<BoundaryRegion> regions;
  std::vector<PassiveBlock> passive;
  MaterialSet materials;
  FlowParams flow;
  DrainageSettings drainage;
  FilterSettings filter;
  std::vector<double> volume_fractions{0.3, 0.2, 0.2};
  ObjectiveSpec objective;
  OptSettings optimizer;
  ClosureSettings closure;
  std::string output_dir = "out";

  /// Full consistency check; throws ErrorKind::config naming the offending field.
  void validate() const;
  /// Flow parameters with D_s calibrated when drainage.automatic.
  FlowParams resolved_flow() const;
  /// Objective after closure mode is applied (energy_penalty closure forces that variant).
  ObjectiveSpec effective_objective() const;
  int channels() const { return materials.count(); }
  double volume_fraction_total() const;
  std::vector<const BoundaryRegion*> regions_with(RegionRole role) const;
};

/// Passive blocks, then the non-design skin when closure.mode == skin.
DomainMask build_domain_mask(const ProblemSpec& problem, const Grid& grid);

/// Domain faces, encoded 2*axis + side, exempt from the non-design skin:
/// faces touched by an inlet region and symmetry planes.
std::vector<int> skin_exempt_faces(const ProblemSpec& problem, const Grid& grid);

/// Strict JSON reader: unknown keys and type mismatches are errors that report
/// the key path and the expected type.
ProblemSpec parse_problem(const std::string& json_text);
ProblemSpec load_problem(const std::string& path);
std::string problem_to_json(const ProblemSpec& problem);

}  // namespace softopt
