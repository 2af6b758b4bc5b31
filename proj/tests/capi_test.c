/* Exercises the C interface the command line is built on. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "softopt/softopt.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

#define EXPECT_STATUS(call, want)                                                           \
  do {                                                                                      \
    softopt_status got_ = (call);                                                           \
    if (got_ != (want)) {                                                                   \
      fprintf(stderr, "%s:%d: %s returned %s (%s), expected %s\n", __FILE__, __LINE__, #call, \
              softopt_status_name(got_), softopt_last_error(), softopt_status_name(want));  \
      ++failures;                                                                           \
    }                                                                                       \
  } while (0)

static void join(char* out, size_t cap, const char* dir, const char* name) {
  snprintf(out, cap, "%s/%s", dir, name);
}

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : "capi_out";
  char problem_path[512], design_path[512], csv_path[512], seal_path[512], vtk_path[512], opt_dir[512];
  join(problem_path, sizeof problem_path, dir, "pneunet2d.json");
  join(design_path, sizeof design_path, dir, "pneunet2d_design.json");
  join(csv_path, sizeof csv_path, dir, "sweep.csv");
  join(seal_path, sizeof seal_path, dir, "seal.json");
  join(vtk_path, sizeof vtk_path, dir, "fields.vtk");
  join(opt_dir, sizeof opt_dir, dir, "zero");

  softopt_set_log_level(0);
  EXPECT(strlen(softopt_version()) > 0);
  EXPECT(strcmp(softopt_status_name(SOFTOPT_ERR_CONFIG), "config") == 0);

  /* argument and parse errors */
  softopt_problem* problem = NULL;
  EXPECT_STATUS(softopt_problem_load(NULL, &problem), SOFTOPT_ERR_ARGUMENT);
  EXPECT_STATUS(softopt_problem_parse("{not json", &problem), SOFTOPT_ERR_CONFIG);
  EXPECT(strstr(softopt_last_error(), "JSON") != NULL);
  EXPECT_STATUS(softopt_problem_load("no_such_fixture_or_file.json", &problem), SOFTOPT_ERR_IO);
  EXPECT(problem == NULL);

  /* fixture round trip through a file */
  EXPECT_STATUS(softopt_write_fixture("pneunet2d", problem_path, design_path), SOFTOPT_OK);
  EXPECT_STATUS(softopt_write_fixture("finger2d", problem_path, design_path), SOFTOPT_ERR_CONFIG);
  EXPECT_STATUS(softopt_write_fixture("pneunet2d", problem_path, design_path), SOFTOPT_OK);
  EXPECT_STATUS(softopt_problem_load(problem_path, &problem), SOFTOPT_OK);
  if (!problem) return 1;

  char* text = NULL;
  EXPECT_STATUS(softopt_problem_to_json(problem, &text), SOFTOPT_OK);
  EXPECT(text && strstr(text, "softopt-problem") != NULL);
  softopt_problem* again = NULL;
  EXPECT_STATUS(softopt_problem_parse(text, &again), SOFTOPT_OK);
  softopt_problem_free(again);
  softopt_string_free(text);

  size_t n = 0;
  EXPECT_STATUS(softopt_problem_num_elements(problem, &n), SOFTOPT_OK);
  EXPECT(n > 0);
  EXPECT_STATUS(softopt_problem_set_max_iters(problem, -1), SOFTOPT_ERR_ARGUMENT);
  EXPECT_STATUS(softopt_problem_set_closure(problem, "duct_tape"), SOFTOPT_ERR_CONFIG);
  EXPECT_STATUS(softopt_problem_set_closure(problem, "none"), SOFTOPT_OK);

  softopt_design* design = NULL;
  EXPECT_STATUS(softopt_design_load(design_path, &design), SOFTOPT_OK);
  if (!design) return 1;
  size_t nd = 0;
  EXPECT_STATUS(softopt_design_num_elements(design, &nd), SOFTOPT_OK);
  EXPECT(nd == n);
  double* rho = (double*)malloc(sizeof(double) * nd);
  EXPECT_STATUS(softopt_design_channel(design, 0, rho, nd), SOFTOPT_OK);
  EXPECT_STATUS(softopt_design_channel(design, 3, rho, nd), SOFTOPT_ERR_ARGUMENT);
  EXPECT_STATUS(softopt_design_channel(design, 0, rho, nd - 1), SOFTOPT_ERR_ARGUMENT);
  size_t solid = 0;
  for (size_t i = 0; i < nd; ++i) solid += rho[i] > 0.5;
  EXPECT(solid > 0 && solid < nd);
  free(rho);

  /* default nine-point sweep */
  double table[9 * 5];
  EXPECT_STATUS(softopt_evaluate(design, problem, NULL, 9, 1, table, csv_path), SOFTOPT_OK);
  EXPECT(fabs(table[0] - 0.1) < 1e-12 && fabs(table[8 * 5] - 1000.0) < 1e-9);
  for (int i = 1; i < 9; ++i) EXPECT(table[5 * i + 1] <= table[5 * (i - 1) + 1]);
  for (int i = 0; i < 9; ++i) EXPECT(table[5 * i + 2] > 0.0 && table[5 * i + 4] > 0.0);

  double bad_sweep[2] = {10.0, 1.0};
  EXPECT_STATUS(softopt_evaluate(design, problem, bad_sweep, 2, 1, NULL, NULL), SOFTOPT_ERR_CONFIG);

  int sealed = -1;
  size_t leak = 0;
  EXPECT_STATUS(softopt_seal_check(design, problem, &sealed, &leak, seal_path), SOFTOPT_OK);
  EXPECT(sealed == 1 && leak == 0);
  EXPECT_STATUS(softopt_export_vtk(design, problem, vtk_path), SOFTOPT_OK);
  FILE* f = fopen(vtk_path, "r");
  EXPECT(f != NULL);
  if (f) {
    char line[128];
    EXPECT(fgets(line, sizeof line, f) && strncmp(line, "# vtk DataFile", 14) == 0);
    fclose(f);
  }

  /* a design that does not fit the problem */
  softopt_problem* finger = NULL;
  EXPECT_STATUS(softopt_problem_load("gripper3d", &finger), SOFTOPT_OK);
  EXPECT_STATUS(softopt_seal_check(design, finger, &sealed, &leak, NULL), SOFTOPT_ERR_DIMENSION);

  /* zero iterations write the initialisation and report the iteration limit */
  softopt_problem_free(finger);
  finger = NULL;
  EXPECT_STATUS(softopt_problem_load("finger2d", &finger), SOFTOPT_OK);
  EXPECT_STATUS(softopt_problem_set_max_iters(finger, 0), SOFTOPT_OK);
  EXPECT_STATUS(softopt_problem_set_output_dir(finger, opt_dir), SOFTOPT_OK);
  int exit_code = -1;
  EXPECT_STATUS(softopt_optimize(finger, &exit_code), SOFTOPT_OK);
  EXPECT(exit_code == 2);
  char summary[600];
  join(summary, sizeof summary, opt_dir, "summary.json");
  f = fopen(summary, "r");
  EXPECT(f != NULL);
  if (f) fclose(f);

  EXPECT_STATUS(softopt_optimize(NULL, &exit_code), SOFTOPT_ERR_ARGUMENT);
  softopt_problem_free(finger);
  softopt_design_free(design);
  softopt_problem_free(problem);

  if (failures) fprintf(stderr, "%d C API check(s) failed\n", failures);
  else printf("C API checks passed\n");
  return failures ? 1 : 0;
}
