#include "softopt/softopt.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "softopt/bench.hpp"
#include "softopt/commands.hpp"
#include "softopt/error.hpp"
#include "softopt/fixtures.hpp"
#include "softopt/io.hpp"
#include "softopt/log.hpp"

struct softopt_problem {
  softopt::ProblemSpec spec;
};

struct softopt_design {
  softopt::DesignFile file;
};

namespace {

thread_local std::string g_last_error;

softopt_status status_of(softopt::ErrorKind kind) {
  using softopt::ErrorKind;
  switch (kind) {
    case ErrorKind::config: return SOFTOPT_ERR_CONFIG;
    case ErrorKind::size: return SOFTOPT_ERR_SIZE;
    case ErrorKind::dimension: return SOFTOPT_ERR_DIMENSION;
    case ErrorKind::solver: return SOFTOPT_ERR_SOLVER;
    case ErrorKind::degenerate: return SOFTOPT_ERR_DEGENERATE;
    case ErrorKind::io: return SOFTOPT_ERR_IO;
    case ErrorKind::optimizer: return SOFTOPT_ERR_OPTIMIZER;
  }
  return SOFTOPT_ERR_INTERNAL;
}

template <class F>
softopt_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return SOFTOPT_OK;
  } catch (const softopt::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SOFTOPT_ERR_SIZE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SOFTOPT_ERR_INTERNAL;
  }
}

softopt_status bad_argument(const char* what) {
  g_last_error = what;
  return SOFTOPT_ERR_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* softopt_version(void) { return "0.1.0"; }

const char* softopt_last_error(void) { return g_last_error.c_str(); }

const char* softopt_status_name(softopt_status s) {
  switch (s) {
    case SOFTOPT_OK: return "ok";
    case SOFTOPT_ERR_CONFIG: return "config";
    case SOFTOPT_ERR_SIZE: return "size";
    case SOFTOPT_ERR_DIMENSION: return "dimension";
    case SOFTOPT_ERR_SOLVER: return "solver";
    case SOFTOPT_ERR_DEGENERATE: return "degenerate";
    case SOFTOPT_ERR_IO: return "io";
    case SOFTOPT_ERR_OPTIMIZER: return "optimizer";
    case SOFTOPT_ERR_ARGUMENT: return "argument";
    case SOFTOPT_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void softopt_set_log_level(int level) {
  softopt::set_log_level(static_cast<softopt::LogLevel>(std::clamp(level, 0, 3)));
}

softopt_status softopt_problem_load(const char* path, softopt_problem** out) {
  if (!path || !out) return bad_argument("null argument");
  return guarded([&] { *out = new softopt_problem{softopt::resolve_problem(path)}; });
}

softopt_status softopt_problem_parse(const char* text, softopt_problem** out) {
  if (!text || !out) return bad_argument("null argument");
  return guarded([&] { *out = new softopt_problem{softopt::parse_problem(text)}; });
}

void softopt_problem_free(softopt_problem* p) { delete p; }

softopt_status softopt_problem_to_json(const softopt_problem* p, char** out) {
  if (!p || !out) return bad_argument("null argument");
  return guarded([&] { *out = copy_string(softopt::problem_to_json(p->spec)); });
}

softopt_status softopt_problem_set_max_iters(softopt_problem* p, int max_iters) {
  if (!p) return bad_argument("null problem");
  if (max_iters < 0) return bad_argument("max_iters must be >= 0");
  p->spec.optimizer.max_iters = max_iters;
  return SOFTOPT_OK;
}

softopt_status softopt_problem_set_closure(softopt_problem* p, const char* mode) {
  if (!p || !mode) return bad_argument("null argument");
  return guarded([&] {
    auto spec = p->spec;
    spec.closure.mode = softopt::closure_mode_from_string(mode);
    spec.validate();
    p->spec = spec;
  });
}

softopt_status softopt_problem_set_output_dir(softopt_problem* p, const char* dir) {
  if (!p || !dir) return bad_argument("null argument");
  p->spec.output_dir = dir;
  return SOFTOPT_OK;
}

softopt_status softopt_problem_num_elements(const softopt_problem* p, size_t* out) {
  if (!p || !out) return bad_argument("null argument");
  size_t n = 1;
  for (int a = 0; a < p->spec.grid.dim; ++a) n *= static_cast<size_t>(p->spec.grid.nel[a]);
  *out = n;
  return SOFTOPT_OK;
}

void softopt_string_free(char* s) { std::free(s); }

softopt_status softopt_design_load(const char* path, softopt_design** out) {
  if (!path || !out) return bad_argument("null argument");
  return guarded([&] { *out = new softopt_design{softopt::resolve_design(path)}; });
}

void softopt_design_free(softopt_design* d) { delete d; }

softopt_status softopt_design_num_elements(const softopt_design* d, size_t* out) {
  if (!d || !out) return bad_argument("null argument");
  *out = static_cast<size_t>(d->file.design.num_elements());
  return SOFTOPT_OK;
}

softopt_status softopt_design_channel(const softopt_design* d, int channel, double* values, size_t capacity) {
  if (!d || !values) return bad_argument("null argument");
  if (channel < 0 || channel > 2) return bad_argument("channel must be 0, 1 or 2");
  const auto& v = d->file.design.rho[channel];
  if (capacity < static_cast<size_t>(v.size())) return bad_argument("buffer too small");
  std::memcpy(values, v.data(), sizeof(double) * v.size());
  return SOFTOPT_OK;
}

softopt_status softopt_optimize(const softopt_problem* p, int* exit_code) {
  if (!p || !exit_code) return bad_argument("null argument");
  return guarded([&] {
    const auto out = softopt::optimize_command(p->spec, {});
    *exit_code = out.exit_code;
    if (out.exit_code > 2) g_last_error = out.result.stage + ": " + out.result.error;
  });
}

softopt_status softopt_evaluate(const softopt_design* d, const softopt_problem* p, const double* k_out, size_t n_k,
                                int threads, double* table, const char* csv_path) {
  if (!d || !p) return bad_argument("null argument");
  return guarded([&] {
    softopt::check_design_fits(d->file, p->spec);
    std::vector<double> sweep = k_out ? std::vector<double>(k_out, k_out + n_k) : softopt::default_sweep();
    if (!k_out && n_k != sweep.size() && table) softopt::fail(softopt::ErrorKind::config, "default sweep has 9 points");
    const auto rows = softopt::evaluate_design(p->spec, d->file.design, sweep, threads);
    if (table)
      for (size_t i = 0; i < rows.size(); ++i) {
        table[5 * i + 0] = rows[i].k_out;
        table[5 * i + 1] = rows[i].u_out;
        table[5 * i + 2] = rows[i].SE;
        table[5 * i + 3] = rows[i].W;
        table[5 * i + 4] = rows[i].E_t;
      }
    if (csv_path) softopt::write_file_atomic(csv_path, softopt::sweep_csv(rows));
  });
}

softopt_status softopt_seal_check(const softopt_design* d, const softopt_problem* p, int* sealed,
                                  size_t* leak_length, const char* json_path) {
  if (!d || !p) return bad_argument("null argument");
  return guarded([&] {
    softopt::check_design_fits(d->file, p->spec);
    const auto r = softopt::seal_check(p->spec, d->file.design);
    if (sealed) *sealed = r.sealed ? 1 : 0;
    if (leak_length) *leak_length = r.leak_path.size();
    if (json_path) softopt::write_file_atomic(json_path, softopt::seal_report_json(r));
  });
}

softopt_status softopt_export_vtk(const softopt_design* d, const softopt_problem* p, const char* vtk_path) {
  if (!d || !p || !vtk_path) return bad_argument("null argument");
  return guarded([&] {
    softopt::check_design_fits(d->file, p->spec);
    softopt::write_file_atomic(vtk_path, softopt::export_vtk(p->spec, d->file.design));
  });
}

softopt_status softopt_write_fixture(const char* name, const char* problem_path, const char* design_path) {
  if (!name || !problem_path) return bad_argument("null argument");
  return guarded([&] {
    const auto spec = softopt::fixture(name);
    softopt::write_file_atomic(problem_path, softopt::problem_to_json(spec));
    if (design_path) {
      if (!softopt::has_fixture_design(name))
        softopt::fail(softopt::ErrorKind::config, std::string("fixture '") + name + "' has no built-in design");
      softopt::write_file_atomic(design_path,
                                 softopt::design_to_json(softopt::fixture_design(name), spec.grid, spec.channels()));
    }
  });
}

softopt_status softopt_bench(const char* suite_path, const char* out_dir, int threads) {
  if (!out_dir) return bad_argument("null output directory");
  return guarded([&] {
    const auto suite = suite_path ? softopt::load_suite(suite_path) : softopt::default_suite();
    softopt::run_suite(suite, threads, out_dir);
  });
}

}  // extern "C"
