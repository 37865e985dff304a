/* C interface to the fuzzy n-cell number library.
 *
 * Objects are opaque and owned by the caller once returned; free them with
 * the matching *_free function. Functions return an fno_code; on failure the
 * thread-local fno_last_error() / fno_last_error_kind() describe why.
 */
#ifndef FNO_FNO_H
#define FNO_FNO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FNO_API __declspec(dllexport)
#else
#define FNO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fno_code {
  FNO_OK = 0,
  FNO_NEGATIVE = 1,        /* Refuted, NotFound, NotDifferentiable */
  FNO_INPUT_ERROR = 2,     /* bad input, parse errors, illegal level sets */
  FNO_NUMERICAL_ERROR = 3, /* NoConvergence, NotRepresentable, Inconclusive */
  FNO_INTERNAL_ERROR = 4
} fno_code;

typedef enum fno_relation { FNO_LE = 0, FNO_GE = 1, FNO_EQ = 2, FNO_INCOMPARABLE = 3 } fno_relation;

typedef struct fno_grid fno_grid;
typedef struct fno_number fno_number;
typedef struct fno_problem fno_problem;
typedef struct fno_report fno_report;

typedef struct fno_vec {
  const double* data;
  size_t size;
} fno_vec;

FNO_API const char* fno_version(void);
FNO_API const char* fno_last_error(void);
/* Error category name such as "InvalidLevelSets"; empty after success. */
FNO_API const char* fno_last_error_kind(void);

/* Level grids. */
FNO_API fno_code fno_grid_uniform(size_t count, fno_grid** out);
FNO_API fno_code fno_grid_from_levels(const double* levels, size_t count, fno_grid** out);
FNO_API void fno_grid_free(fno_grid* grid);
FNO_API size_t fno_grid_size(const fno_grid* grid);
FNO_API double fno_grid_level(const fno_grid* grid, size_t k);

/* Fuzzy n-cell numbers. Endpoint arrays are row-major: cell * L + level. */
FNO_API fno_code fno_number_from_endpoints(const fno_grid* grid, size_t cells, const double* lo,
                                           const double* hi, fno_number** out);
FNO_API fno_code fno_number_crisp(const fno_grid* grid, const double* point, size_t n,
                                  fno_number** out);
FNO_API fno_code fno_number_triangular(const fno_grid* grid, double l, double c, double u,
                                       fno_number** out);
FNO_API void fno_number_free(fno_number* u);
FNO_API size_t fno_number_cells(const fno_number* u);
FNO_API size_t fno_number_levels(const fno_number* u);
/* Copies the L lower and upper endpoints of one cell. */
FNO_API fno_code fno_number_endpoints(const fno_number* u, size_t cell, double* lo, double* hi);

FNO_API fno_code fno_number_add(const fno_number* u, const fno_number* v, fno_number** out);
FNO_API fno_code fno_number_scale(double k, const fno_number* u, fno_number** out);
FNO_API fno_code fno_number_mul(const fno_number* u, const fno_number* v, fno_number** out);
FNO_API fno_code fno_number_gdiff(const fno_number* u, const fno_number* v, fno_number** out);
FNO_API fno_code fno_number_distance(const fno_number* u, const fno_number* v, double* out);
FNO_API fno_code fno_number_order(const fno_number* u, const fno_number* v, double tol,
                                  fno_relation* out);
/* CSV rows "r,i,lo,hi"; release with fno_string_free. */
FNO_API fno_code fno_number_to_csv(const fno_number* u, char** out);
FNO_API void fno_string_free(char* s);

/* Problem files (schema "fno/1"). */
FNO_API fno_code fno_problem_load_file(const char* path, fno_problem** out);
FNO_API fno_code fno_problem_load_string(const char* json, fno_problem** out);
FNO_API void fno_problem_free(fno_problem* p);
FNO_API size_t fno_problem_domain_dim(const fno_problem* p);
FNO_API size_t fno_problem_cell_dim(const fno_problem* p);
FNO_API size_t fno_problem_constraint_count(const fno_problem* p);

/* One command invocation. Unused fields stay zero / NULL. */
typedef struct fno_request {
  const char* command;   /* "eval", "dderiv", "kkt-search", ... */
  const char* function;  /* NULL or "objective", "g1".."gk", "composite" */
  fno_vec at;
  fno_vec other;         /* gdiff --minus-at, metric --other */
  fno_vec dir;
  fno_vec lambda;
  fno_vec from;
  const char* side;      /* "right" (default), "left", "two-sided" */
  const char* candidate; /* JSON text for subgrad-verify */
  int has_seed;
  uint64_t seed;
} fno_request;

FNO_API void fno_request_init(fno_request* req);

/* Runs a command. *out always receives a report (also for failures) unless
 * FNO_INTERNAL_ERROR is returned; the return value is the command's exit
 * code. */
FNO_API fno_code fno_run(const fno_problem* p, const fno_request* req, fno_report** out);

/* Error report for a failure outside fno_run, e.g. a problem file that did
 * not load. Uses the current fno_last_error(). */
FNO_API fno_code fno_error_report(const char* command, fno_report** out);

FNO_API void fno_report_free(fno_report* r);
FNO_API const char* fno_report_status(const fno_report* r);
FNO_API fno_code fno_report_code(const fno_report* r);
/* Pretty-printed JSON document. */
FNO_API const char* fno_report_json(const fno_report* r);
/* CSV text or NULL when the command has no level-set output. */
FNO_API const char* fno_report_csv(const fno_report* r);

#ifdef __cplusplus
}
#endif

#endif /* FNO_FNO_H */
