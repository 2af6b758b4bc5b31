// softopt command line: thin layer over the C API.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "softopt/softopt.h"

namespace {

constexpr int kFailure = 3;

int report(softopt_status s) {
  if (s == SOFTOPT_OK) return 0;
  std::fprintf(stderr, "softopt: %s error: %s\n", softopt_status_name(s), softopt_last_error());
  return kFailure;
}

struct Handles {
  softopt_problem* problem = nullptr;
  softopt_design* design = nullptr;
  ~Handles() {
    softopt_problem_free(problem);
    softopt_design_free(design);
  }
};

std::string g_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"softopt: topology optimisation of pressure-actuated soft actuators"};
  app.require_subcommand(1);
  int threads = 1;

  std::string problem_arg, design_arg, out_path, out_dir, closure, suite_arg, fixture_name, design_out;
  int max_iters = -1;
  std::vector<double> sweep;
  const std::vector<std::string> closures{"none", "heuristic", "skin", "energy_penalty"};

  auto* opt = app.add_subcommand("optimize", "optimise a problem file or built-in fixture");
  opt->add_option("problem", problem_arg, "problem file or fixture name")->required();
  opt->add_option("--max-iters", max_iters, "iteration limit")->check(CLI::NonNegativeNumber);
  opt->add_option("--out-dir", out_dir, "artifact directory");
  opt->add_option("--closure", closure, "airtightness treatment")->check(CLI::IsMember(closures));
  opt->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* ev = app.add_subcommand("evaluate", "spring sweep of a fixed design");
  ev->add_option("design", design_arg, "design file")->required();
  ev->add_option("problem", problem_arg, "problem file or fixture name")->required();
  ev->add_option("--sweep", sweep, "k_out values in N/m, comma separated")->delimiter(',');
  ev->add_option("-o,--output", out_path, "CSV output (default stdout)");
  ev->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* seal = app.add_subcommand("seal-check", "flood-fill airtightness check");
  seal->add_option("design", design_arg, "design file")->required();
  seal->add_option("problem", problem_arg, "problem file or fixture name")->required();
  seal->add_option("-o,--output", out_path, "JSON report");

  auto* ex = app.add_subcommand("export", "solve a design and write VTK fields");
  ex->add_option("design", design_arg, "design file")->required();
  ex->add_option("problem", problem_arg, "problem file or fixture name")->required();
  ex->add_option("-o,--output", out_path, "VTK file")->required();

  auto* fx = app.add_subcommand("fixture", "write a built-in problem (and design) to disk");
  fx->add_option("name", fixture_name, "finger2d|gripper2d|gripper3d|pneunet2d")->required();
  fx->add_option("-o,--output", out_path, "problem file")->required();
  fx->add_option("--design", design_out, "design file (pneunet2d)");

  auto* bench = app.add_subcommand("bench", "closure comparison suite");
  bench->add_option("suite", suite_arg, "suite file (default: built-in finger2d comparison)");
  bench->add_option("--out-dir", out_dir, "output directory")->required();
  bench->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  Handles h;
  if (*opt) {
    if (int rc = report(softopt_problem_load(problem_arg.c_str(), &h.problem))) return rc;
    if (max_iters >= 0) softopt_problem_set_max_iters(h.problem, max_iters);
    if (!out_dir.empty()) softopt_problem_set_output_dir(h.problem, out_dir.c_str());
    if (!closure.empty())
      if (int rc = report(softopt_problem_set_closure(h.problem, closure.c_str()))) return rc;
    int exit_code = kFailure;
    if (int rc = report(softopt_optimize(h.problem, &exit_code))) return rc;
    if (exit_code > 2) std::fprintf(stderr, "softopt: optimisation failed: %s\n", softopt_last_error());
    return exit_code;
  }

  if (*fx) {
    return report(softopt_write_fixture(fixture_name.c_str(), out_path.c_str(),
                                        design_out.empty() ? nullptr : design_out.c_str()));
  }

  if (*bench) {
    return report(softopt_bench(suite_arg.empty() ? nullptr : suite_arg.c_str(), out_dir.c_str(), threads));
  }

  if (int rc = report(softopt_problem_load(problem_arg.c_str(), &h.problem))) return rc;
  if (int rc = report(softopt_design_load(design_arg.c_str(), &h.design))) return rc;

  if (*ev) {
    const bool dflt = sweep.empty();
    const size_t n = dflt ? 9 : sweep.size();
    std::vector<double> table(5 * n);
    if (int rc = report(softopt_evaluate(h.design, h.problem, dflt ? nullptr : sweep.data(), n, threads,
                                         table.data(), out_path.empty() ? nullptr : out_path.c_str())))
      return rc;
    if (out_path.empty()) {
      std::printf("k_out,u_out,SE,W,E_t\r\n");
      for (size_t i = 0; i < n; ++i)
        std::printf("%s,%s,%s,%s,%s\r\n", g_num(table[5 * i]).c_str(), g_num(table[5 * i + 1]).c_str(),
                    g_num(table[5 * i + 2]).c_str(), g_num(table[5 * i + 3]).c_str(), g_num(table[5 * i + 4]).c_str());
    }
    return 0;
  }

  if (*seal) {
    int sealed = 0;
    size_t leak = 0;
    if (int rc = report(softopt_seal_check(h.design, h.problem, &sealed, &leak,
                                           out_path.empty() ? nullptr : out_path.c_str())))
      return rc;
    if (sealed) std::printf("sealed\n");
    else std::printf("leaking: path of %zu elements\n", leak);
    return sealed ? 0 : 1;
  }

  if (*ex) return report(softopt_export_vtk(h.design, h.problem, out_path.c_str()));
  return kFailure;
}
