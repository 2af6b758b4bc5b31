/* C interface to the softopt engine. All functions return a status code;
 * on failure softopt_last_error() describes the problem (per thread). */
#ifndef SOFTOPT_SOFTOPT_H
#define SOFTOPT_SOFTOPT_H

#include <stddef.h>

#if defined(SOFTOPT_BUILDING_LIBRARY)
#define SOFTOPT_API __attribute__((visibility("default")))
#else
#define SOFTOPT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum softopt_status {
  SOFTOPT_OK = 0,
  SOFTOPT_ERR_CONFIG = 1,
  SOFTOPT_ERR_SIZE = 2,
  SOFTOPT_ERR_DIMENSION = 3,
  SOFTOPT_ERR_SOLVER = 4,
  SOFTOPT_ERR_DEGENERATE = 5,
  SOFTOPT_ERR_IO = 6,
  SOFTOPT_ERR_OPTIMIZER = 7,
  SOFTOPT_ERR_ARGUMENT = 8,
  SOFTOPT_ERR_INTERNAL = 9
} softopt_status;

typedef struct softopt_problem softopt_problem;
typedef struct softopt_design softopt_design;

SOFTOPT_API const char* softopt_version(void);
SOFTOPT_API const char* softopt_last_error(void);
SOFTOPT_API const char* softopt_status_name(softopt_status status);

/* 0 error, 1 warn, 2 info, 3 debug. Overrides SOFTOPT_LOG_LEVEL. */
SOFTOPT_API void softopt_set_log_level(int level);

/* Problems: a file path, or a built-in fixture name when no such file exists. */
SOFTOPT_API softopt_status softopt_problem_load(const char* path_or_fixture, softopt_problem** out);
SOFTOPT_API softopt_status softopt_problem_parse(const char* json_text, softopt_problem** out);
SOFTOPT_API void softopt_problem_free(softopt_problem* problem);
/* Caller frees the returned string with softopt_string_free. */
SOFTOPT_API softopt_status softopt_problem_to_json(const softopt_problem* problem, char** out);
SOFTOPT_API softopt_status softopt_problem_set_max_iters(softopt_problem* problem, int max_iters);
SOFTOPT_API softopt_status softopt_problem_set_closure(softopt_problem* problem, const char* mode);
SOFTOPT_API softopt_status softopt_problem_set_output_dir(softopt_problem* problem, const char* dir);
SOFTOPT_API softopt_status softopt_problem_num_elements(const softopt_problem* problem, size_t* out);
SOFTOPT_API void softopt_string_free(char* s);

/* Designs: a design file, or a fixture name with a built-in design. */
SOFTOPT_API softopt_status softopt_design_load(const char* path_or_fixture, softopt_design** out);
SOFTOPT_API void softopt_design_free(softopt_design* design);
SOFTOPT_API softopt_status softopt_design_num_elements(const softopt_design* design, size_t* out);
/* Copies channel (0-2) densities into values[0 .. num_elements). */
SOFTOPT_API softopt_status softopt_design_channel(const softopt_design* design, int channel, double* values,
                                                  size_t capacity);

/* Runs the optimiser and writes its artifacts to the problem's output
 * directory. exit_code: 0 converged, 2 iteration limit, 3 failure. */
SOFTOPT_API softopt_status softopt_optimize(const softopt_problem* problem, int* exit_code);

/* Fixed-design sweep. table receives n_k rows of (k_out, u_out, SE, W, E_t);
 * csv_path may be NULL. k_out may be NULL for the default nine-point sweep
 * (then n_k must be 9). */
SOFTOPT_API softopt_status softopt_evaluate(const softopt_design* design, const softopt_problem* problem,
                                            const double* k_out, size_t n_k, int threads, double* table,
                                            const char* csv_path);

/* sealed receives 1 or 0; leak_length the element count of the leak path.
 * json_path may be NULL. */
SOFTOPT_API softopt_status softopt_seal_check(const softopt_design* design, const softopt_problem* problem,
                                              int* sealed, size_t* leak_length, const char* json_path);

SOFTOPT_API softopt_status softopt_export_vtk(const softopt_design* design, const softopt_problem* problem,
                                              const char* vtk_path);

/* Writes a fixture's problem file and, when it has one, its design file
 * (design_path may be NULL). */
SOFTOPT_API softopt_status softopt_write_fixture(const char* name, const char* problem_path,
                                                 const char* design_path);

/* suite_path NULL runs the default closure comparison. */
SOFTOPT_API softopt_status softopt_bench(const char* suite_path, const char* out_dir, int threads);

#ifdef __cplusplus
}
#endif

#endif
