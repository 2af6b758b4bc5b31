#pragma once

#include <optional>
#include <string>
#include <vector>

#include "softopt/closure.hpp"
#include "softopt/io.hpp"
#include "softopt/problem.hpp"

namespace softopt {

enum class CaseSource { optimize, design };

struct ComparisonCase {
  std::string label;
  CaseSource source = CaseSource::optimize;
  std::string problem;  // path or fixture name
  ClosureMode closure = ClosureMode::none;
  std::string design;   // CaseSource::design: path or fixture name
  std::optional<int> max_iters;
};

struct Suite {
  std::string name = "suite";
  std::vector<double> sweep;
  std::vector<ComparisonCase> cases;
};

/// {"format": "softopt-suite", "version": 1, "name", "sweep_N_per_m", "cases": [...]}
Suite parse_suite(const std::string& json_text);
Suite load_suite(const std::string& path);
/// no-closure, heuristic and skin optimisations of finger2d plus the pneunet design.
Suite default_suite();

struct CaseResult {
  std::string label;
  bool ok = false;
  std::string error;
  std::vector<SweepRow> rows;
  SealReport seal;
  int exit_code = 0;
};

struct SuiteResult {
  std::vector<double> sweep;
  std::vector<CaseResult> cases;  // suite order
};

/// Cases run on up to `threads` workers and are reported in suite order; a
/// failing case is recorded and the rest continue. With a non-empty out_dir,
/// case artifacts go to out_dir/<label>/ and the tables to out_dir.
SuiteResult run_suite(const Suite& suite, int threads = 1, const std::string& out_dir = "");

extern const std::vector<std::string> kSweepMetrics;  // u_out, SE, W, E_t
/// Rows k_out, one column per successful case.
std::string metric_csv(const SuiteResult& result, const std::string& metric);
/// Per metric and sweep endpoint, case labels from largest to smallest value.
std::string orderings_json(const SuiteResult& result);

}  // namespace softopt
