#pragma once

#include <optional>
#include <string>
#include <vector>

#include "softopt/closure.hpp"
#include "softopt/io.hpp"
#include "softopt/optimizer.hpp"
#include "softopt/problem.hpp"

namespace softopt {

/// A problem file path, or the name of a built-in fixture when no such file exists.
ProblemSpec resolve_problem(const std::string& path_or_fixture);
/// A design file path, or a fixture name with a built-in design.
DesignFile resolve_design(const std::string& path_or_fixture);

struct OptimizeOptions {
  std::optional<int> max_iters;
  std::optional<std::string> out_dir;
  std::optional<ClosureMode> closure;
  bool write_files = true;
};

ProblemSpec apply_overrides(ProblemSpec problem, const OptimizeOptions& options);

struct OptimizeOutcome {
  int exit_code = 3;  // 0 converged, 2 max iterations, 3 failure
  OptResult result;
  PhysicalDesign final_design;  // after closure post-processing
  std::optional<SkinResult> skin;
  SealReport seal;
  PerformanceMetrics final_metrics;
  bool max_principle = true;
  std::string out_dir;
};

/// Runs the optimiser and, with write_files, writes problem.json, history.csv,
/// design.json (plus design_sealed.json for the heuristic closure), fields.vtk
/// and summary.json into the output directory.
OptimizeOutcome optimize_command(const ProblemSpec& problem, const OptimizeOptions& options);

/// 0.1 ... 1000 N/m, nine log-spaced values.
std::vector<double> default_sweep();
/// Throws ErrorKind::config unless values are positive and strictly increasing.
void validate_sweep(const std::vector<double>& sweep);

/// Forward solves of a fixed design for every k_out; points run on up to `threads` workers.
std::vector<SweepRow> evaluate_design(const ProblemSpec& problem, const PhysicalDesign& design,
                                      const std::vector<double>& sweep, int threads = 1);

SealReport seal_check(const ProblemSpec& problem, const PhysicalDesign& design);
std::string seal_report_json(const SealReport& report);

/// Solves the design and renders all fields as legacy VTK.
std::string export_vtk(const ProblemSpec& problem, const PhysicalDesign& design);

}  // namespace softopt
