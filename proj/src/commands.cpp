#include "softopt/commands.hpp"

#include <cmath>
#include <filesystem>
#include <thread>

#include <json.hpp>

#include "softopt/analysis.hpp"
#include "softopt/error.hpp"
#include "softopt/fixtures.hpp"
#include "softopt/log.hpp"

namespace softopt {

namespace fs = std::filesystem;
using nlohmann::json;

ProblemSpec resolve_problem(const std::string& s) {
  if (!fs::exists(s) && is_fixture(s)) return fixture(s);
  return load_problem(s);
}

DesignFile resolve_design(const std::string& s) {
  if (!fs::exists(s) && has_fixture_design(s)) {
    const auto p = fixture(s);
    return {p.grid, p.channels(), fixture_design(s)};
  }
  return load_design(s);
}

ProblemSpec apply_overrides(ProblemSpec p, const OptimizeOptions& o) {
  if (o.max_iters) p.optimizer.max_iters = *o.max_iters;
  if (o.out_dir) p.output_dir = *o.out_dir;
  if (o.closure) p.closure.mode = *o.closure;
  p.validate();
  return p;
}

namespace {

json seal_json(const SealReport& r) {
  return {{"sealed", r.sealed},
          {"leak_path", r.leak_path},
          {"leak_path_length", r.leak_path.size()},
          {"added_fraction", r.added_fraction}};
}

json metrics_json(const PerformanceMetrics& m) {
  return {{"u_out_m", m.u_out}, {"SE_J", m.SE}, {"W_J", m.W}, {"E_t", m.E_t}};
}

std::string path_in(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

}  // namespace

std::string seal_report_json(const SealReport& report) { return seal_json(report).dump(2) + "\n"; }

OptimizeOutcome optimize_command(const ProblemSpec& input, const OptimizeOptions& options) {
  const ProblemSpec problem = apply_overrides(input, options);
  OptimizeOutcome out;
  out.out_dir = problem.output_dir;
  const int channels = problem.channels();
  if (options.write_files) write_file_atomic(path_in(out.out_dir, "problem.json"), problem_to_json(problem));

  out.result = run(problem);
  const auto& res = out.result;
  bool all_max_principle = true;
  for (const auto& r : res.history) all_max_principle = all_max_principle && r.max_principle;

  json summary;
  summary["problem"] = problem.name;
  summary["status"] = to_string(res.status);
  summary["iterations"] = res.history.size();
  summary["closure"] = to_string(problem.closure.mode);
  summary["objective_variant"] = to_string(problem.effective_objective().variant);
  summary["wall_seconds"] = res.seconds;

  if (res.status == RunStatus::failed) {
    summary["stage"] = res.stage;
    summary["error"] = res.error;
    summary["error_kind"] = to_string(res.error_kind);
    if (options.write_files) {
      write_file_atomic(path_in(out.out_dir, "history.csv"), history_csv(res.history));
      if (res.design.num_elements() > 0)
        write_file_atomic(path_in(out.out_dir, "last_good_design.json"),
                          design_to_json(res.design, problem.grid, channels));
      write_file_atomic(path_in(out.out_dir, "summary.json"), summary.dump(2) + "\n");
    }
    log(LogLevel::error, "optimisation failed during " + res.stage + ": " + res.error);
    out.exit_code = 3;
    return out;
  }

  Analysis analysis(problem);
  out.final_design = res.design;
  FieldSolution fields = res.fields ? *res.fields : analysis.solve(res.design);
  if (problem.closure.mode == ClosureMode::heuristic) {
    out.skin = heuristic_skin(res.design, analysis.grid(), fields.p, analysis.flow().P_in, analysis.flow().p_atm,
                              problem.closure.skin_material);
    out.final_design = out.skin->design;
    fields = analysis.solve(out.final_design);
  }
  out.final_metrics = fields.metrics;
  out.max_principle = all_max_principle && fields.max_principle;
  out.seal = check_sealed(out.final_design.rho[0], analysis.grid(), analysis.inlet_faces(), analysis.drain_faces());
  if (out.skin) out.seal.added_fraction = out.skin->added_fraction;

  summary["f"] = res.f;
  summary["g"] = std::vector<double>(res.g.begin(), res.g.begin() + channels);
  summary["grayness"] = res.grayness;
  summary["objective_scale"] = res.scale;
  summary["beta"] = res.beta;
  summary["optimizer_metrics"] = metrics_json(res.fields ? res.fields->metrics : fields.metrics);
  summary["final_metrics"] = metrics_json(fields.metrics);
  summary["E_t"] = fields.metrics.E_t;
  summary["max_principle_ok"] = out.max_principle;
  summary["seal"] = seal_json(out.seal);

  if (options.write_files) {
    write_file_atomic(path_in(out.out_dir, "history.csv"), history_csv(res.history));
    write_file_atomic(path_in(out.out_dir, "design.json"), design_to_json(res.design, problem.grid, channels));
    if (out.skin)
      write_file_atomic(path_in(out.out_dir, "design_sealed.json"),
                        design_to_json(out.final_design, problem.grid, channels));
    VtkFields vf{&out.final_design, &fields.E, &fields.p, &fields.u, channels};
    write_file_atomic(path_in(out.out_dir, "fields.vtk"), vtk_string(analysis.grid(), vf));
    write_file_atomic(path_in(out.out_dir, "summary.json"), summary.dump(2) + "\n");
  }
  out.exit_code = res.status == RunStatus::converged ? 0 : 2;
  return out;
}

std::vector<double> default_sweep() {
  std::vector<double> k;
  for (int i = 0; i < 9; ++i) k.push_back(std::pow(10.0, -1.0 + 0.5 * i));
  return k;
}

void validate_sweep(const std::vector<double>& sweep) {
  if (sweep.empty()) fail(ErrorKind::config, "sweep: at least one spring stiffness is required");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (!(sweep[i] > 0.0) || !std::isfinite(sweep[i])) fail(ErrorKind::config, "sweep: values must be positive");
    if (i > 0 && !(sweep[i] > sweep[i - 1])) fail(ErrorKind::config, "sweep: values must be strictly increasing");
  }
}

std::vector<SweepRow> evaluate_design(const ProblemSpec& problem, const PhysicalDesign& design,
                                      const std::vector<double>& sweep, int threads) {
  validate_sweep(sweep);
  std::vector<SweepRow> rows(sweep.size());
  const int n = static_cast<int>(sweep.size());
  const int workers = std::max(1, std::min(threads, n));
  auto work = [&](int w) {
    Analysis analysis(problem);
    for (int i = w; i < n; i += workers) {
      const auto s = analysis.solve(design, sweep[i]);
      rows[i] = {sweep[i], s.metrics.u_out, s.metrics.SE, s.metrics.W, s.metrics.E_t};
    }
  };
  if (workers == 1) {
    work(0);
    return rows;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        work(w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

SealReport seal_check(const ProblemSpec& problem, const PhysicalDesign& design) {
  Analysis analysis(problem);
  if (design.num_elements() != analysis.grid().num_elements())
    fail(ErrorKind::dimension, "design element count does not match the problem grid");
  return check_sealed(design.rho[0], analysis.grid(), analysis.inlet_faces(), analysis.drain_faces());
}

std::string export_vtk(const ProblemSpec& problem, const PhysicalDesign& design) {
  Analysis analysis(problem);
  const auto s = analysis.solve(design);
  VtkFields vf{&design, &s.E, &s.p, &s.u, problem.channels()};
  return vtk_string(analysis.grid(), vf);
}

}  // namespace softopt
