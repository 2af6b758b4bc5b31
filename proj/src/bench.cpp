#include "softopt/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <thread>

#include <json.hpp>

#include "softopt/commands.hpp"
#include "softopt/error.hpp"
#include "softopt/log.hpp"

namespace softopt {

using nlohmann::json;

Suite parse_suite(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::config, std::string("suite: invalid JSON: ") + e.what());
  }
  try {
    static const std::set<std::string> top{"format", "version", "name", "sweep_N_per_m", "cases"};
    static const std::set<std::string> keys{"label", "source", "problem", "closure", "design", "max_iters"};
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!top.count(it.key())) fail(ErrorKind::config, "suite." + it.key() + ": unknown key");
    if (j.value("format", "softopt-suite") != "softopt-suite") fail(ErrorKind::config, "suite.format: expected 'softopt-suite'");
    Suite s;
    s.name = j.value("name", s.name);
    s.sweep = j.contains("sweep_N_per_m") ? j.at("sweep_N_per_m").get<std::vector<double>>() : default_sweep();
    validate_sweep(s.sweep);
    const auto& cases = j.at("cases");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto& c = cases[i];
      const std::string path = "suite.cases[" + std::to_string(i) + "]";
      for (auto it = c.begin(); it != c.end(); ++it)
        if (!keys.count(it.key())) fail(ErrorKind::config, path + "." + it.key() + ": unknown key");
      ComparisonCase cc;
      cc.label = c.at("label").get<std::string>();
      if (!labels.insert(cc.label).second) fail(ErrorKind::config, path + ".label: duplicate label '" + cc.label + "'");
      const auto source = c.value("source", "optimize");
      if (source == "optimize") cc.source = CaseSource::optimize;
      else if (source == "design") cc.source = CaseSource::design;
      else fail(ErrorKind::config, path + ".source: expected 'optimize' or 'design'");
      cc.problem = c.at("problem").get<std::string>();
      cc.closure = closure_mode_from_string(c.value("closure", "none"));
      if (cc.source == CaseSource::design) cc.design = c.at("design").get<std::string>();
      if (c.contains("max_iters")) cc.max_iters = c.at("max_iters").get<int>();
      s.cases.push_back(cc);
    }
    return s;
  } catch (const json::exception& e) {
    fail(ErrorKind::config, std::string("suite: ") + e.what());
  }
}

Suite load_suite(const std::string& path) { return parse_suite(read_file(path)); }

Suite default_suite() {
  Suite s;
  s.name = "finger2d-closure";
  s.sweep = default_sweep();
  s.cases.push_back({"no-closure", CaseSource::optimize, "finger2d", ClosureMode::none, "", {}});
  s.cases.push_back({"heuristic", CaseSource::optimize, "finger2d", ClosureMode::heuristic, "", {}});
  s.cases.push_back({"skin", CaseSource::optimize, "finger2d", ClosureMode::skin, "", {}});
  s.cases.push_back({"pneunet", CaseSource::design, "pneunet2d", ClosureMode::none, "pneunet2d", {}});
  return s;
}

namespace {

CaseResult run_case(const ComparisonCase& c, const std::vector<double>& sweep, const std::string& out_dir) {
  CaseResult r;
  r.label = c.label;
  try {
    ProblemSpec problem = resolve_problem(c.problem);
    PhysicalDesign design;
    if (c.source == CaseSource::optimize) {
      OptimizeOptions o;
      o.closure = c.closure;
      o.max_iters = c.max_iters;
      o.write_files = !out_dir.empty();
      if (!out_dir.empty()) o.out_dir = (std::filesystem::path(out_dir) / c.label).string();
      auto out = optimize_command(problem, o);
      r.exit_code = out.exit_code;
      if (out.exit_code > 2) fail(ErrorKind::optimizer, out.result.stage + ": " + out.result.error);
      design = out.final_design;
      r.seal = out.seal;
      problem = apply_overrides(problem, o);
    } else {
      const auto file = resolve_design(c.design);
      check_design_fits(file, problem);
      design = file.design;
      r.seal = seal_check(problem, design);
    }
    r.rows = evaluate_design(problem, design, sweep, 1);
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
    log(LogLevel::warn, "bench case '" + c.label + "' failed: " + r.error);
  }
  return r;
}

double metric_value(const SweepRow& row, const std::string& metric) {
  if (metric == "u_out") return row.u_out;
  if (metric == "SE") return row.SE;
  if (metric == "W") return row.W;
  if (metric == "E_t") return row.E_t;
  fail(ErrorKind::config, "unknown metric '" + metric + "'");
}

}  // namespace

const std::vector<std::string> kSweepMetrics{"u_out", "SE", "W", "E_t"};

SuiteResult run_suite(const Suite& suite, int threads, const std::string& out_dir) {
  validate_sweep(suite.sweep);
  SuiteResult res;
  res.sweep = suite.sweep;
  res.cases.resize(suite.cases.size());
  const int n = static_cast<int>(suite.cases.size());
  const int workers = std::max(1, std::min(threads, n));
  auto work = [&](int w) {
    for (int i = w; i < n; i += workers) res.cases[i] = run_case(suite.cases[i], suite.sweep, out_dir);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  if (!out_dir.empty()) {
    for (const auto& m : kSweepMetrics)
      write_file_atomic((std::filesystem::path(out_dir) / (m + ".csv")).string(), metric_csv(res, m));
    write_file_atomic((std::filesystem::path(out_dir) / "summary.json").string(), orderings_json(res));
  }
  return res;
}

std::string metric_csv(const SuiteResult& result, const std::string& metric) {
  std::vector<std::string> header{"k_out"};
  for (const auto& c : result.cases)
    if (c.ok) header.push_back(c.label);
  std::string out = csv_row(header);
  for (std::size_t i = 0; i < result.sweep.size(); ++i) {
    std::vector<std::string> row{csv_number(result.sweep[i])};
    for (const auto& c : result.cases)
      if (c.ok) row.push_back(csv_number(metric_value(c.rows[i], metric)));
    out += csv_row(row);
  }
  return out;
}

std::string orderings_json(const SuiteResult& result) {
  json j;
  json cases = json::array();
  for (const auto& c : result.cases) {
    json jc = {{"label", c.label}, {"ok", c.ok}};
    if (!c.ok) jc["error"] = c.error;
    else jc["seal"] = {{"sealed", c.seal.sealed}, {"added_fraction", c.seal.added_fraction}};
    cases.push_back(jc);
  }
  j["cases"] = cases;
  json orderings;
  if (!result.sweep.empty()) {
    const std::vector<std::pair<std::string, std::size_t>> ends{{"softest", 0}, {"stiffest", result.sweep.size() - 1}};
    for (const auto& m : kSweepMetrics) {
      for (const auto& [name, idx] : ends) {
        std::vector<std::pair<double, std::string>> v;
        for (const auto& c : result.cases)
          if (c.ok) v.emplace_back(metric_value(c.rows[idx], m), c.label);
        std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        json labels = json::array();
        for (const auto& e : v) labels.push_back(e.second);
        orderings[m][name] = {{"k_out", result.sweep[idx]}, {"descending", labels}};
      }
    }
  }
  j["orderings"] = orderings;
  return j.dump(2) + "\n";
}

}  // namespace softopt
