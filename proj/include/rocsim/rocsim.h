/*
 * rocsim C API. Every function returns a rocsim_status; on failure the
 * message is available from rocsim_last_error() on the calling thread.
 * Matrices are d x d, column-major. Labels are 1-based class indices.
 */
#ifndef ROCSIM_H
#define ROCSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ROCSIM_API __declspec(dllexport)
#else
#define ROCSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rocsim_status {
  ROCSIM_OK = 0,
  ROCSIM_ERR_INVALID_INPUT = 1,
  ROCSIM_ERR_EMPTY_SAMPLE = 2,
  ROCSIM_ERR_NO_POSITIVE_PAIRS = 3,
  ROCSIM_ERR_NO_NEGATIVE_PAIRS = 4,
  ROCSIM_ERR_EMPTY_CLASS = 5,
  ROCSIM_ERR_INFEASIBLE = 6,
  ROCSIM_ERR_NUMERICAL = 7,
  ROCSIM_ERR_PARAMETER_DOMAIN = 8,
  ROCSIM_ERR_FORMAT = 9,
  ROCSIM_ERR_IO = 10,
  ROCSIM_ERR_INTERNAL = 100
} rocsim_status;

typedef enum rocsim_kkt_case {
  ROCSIM_KKT_ZERO_P = 0,
  ROCSIM_KKT_COLINEAR = 1,
  ROCSIM_KKT_INTERIOR = 2,
  ROCSIM_KKT_BOUNDARY = 3
} rocsim_kkt_case;

typedef struct rocsim_dataset rocsim_dataset;
typedef struct rocsim_model rocsim_model;

ROCSIM_API const char* rocsim_version(void);
ROCSIM_API const char* rocsim_status_string(rocsim_status status);
/* Message of the last failure on this thread ("" if none). */
ROCSIM_API const char* rocsim_last_error(void);
/* Frees strings returned through char** out-parameters. */
ROCSIM_API void rocsim_string_free(char* s);

/* features: n x d, row-major. num_classes = 0 infers max(label). */
ROCSIM_API rocsim_status rocsim_dataset_create(const double* features, const int* labels, size_t n, size_t d,
                                               int num_classes, rocsim_dataset** out);
ROCSIM_API void rocsim_dataset_free(rocsim_dataset* ds);
ROCSIM_API rocsim_status rocsim_dataset_shape(const rocsim_dataset* ds, size_t* n, size_t* d, int* num_classes);

ROCSIM_API rocsim_status rocsim_model_bilinear(const double* a, size_t d, rocsim_model** out);
ROCSIM_API rocsim_status rocsim_model_threshold(double t, rocsim_model** out);
ROCSIM_API rocsim_status rocsim_model_mahalanobis(const double* a, size_t d, rocsim_model** out);
ROCSIM_API void rocsim_model_free(rocsim_model* m);
ROCSIM_API rocsim_status rocsim_model_score(const rocsim_model* m, const double* x, const double* x_prime, size_t d,
                                            double* out);

ROCSIM_API rocsim_status rocsim_risk_positive(const rocsim_dataset* ds, const rocsim_model* m, double* out);
ROCSIM_API rocsim_status rocsim_risk_negative(const rocsim_dataset* ds, const rocsim_model* m, double* out);
ROCSIM_API rocsim_status rocsim_risk_negative_pair_sampled(const rocsim_dataset* ds, const rocsim_model* m,
                                                           uint64_t budget, uint64_t seed, double* out);
ROCSIM_API rocsim_status rocsim_risk_negative_tuple_sampled(const rocsim_dataset* ds, const rocsim_model* m,
                                                            uint64_t budget, uint64_t seed, double* out);

/* p_out, n_out: d*d doubles each. */
ROCSIM_API rocsim_status rocsim_pair_moments(const rocsim_dataset* ds, double* p_out, double* n_out);
/* a_out: d*d doubles. lambda, gamma, case_tag may be NULL. */
ROCSIM_API rocsim_status rocsim_solve_kkt(const double* p, const double* n, size_t d, double alpha, double* a_out,
                                          double* lambda, double* gamma, rocsim_kkt_case* case_tag);
ROCSIM_API rocsim_status rocsim_threshold_scan(const rocsim_dataset* ds, double alpha, double* t_hat,
                                               double* r_plus, double* r_minus);

typedef struct rocsim_mmc_options {
  double step_size;      /* <= 0: default */
  uint64_t max_iters;    /* 0: default */
  double tol;            /* <= 0: default */
  uint64_t tuple_budget; /* 0: all negative pairs */
  uint64_t seed;
} rocsim_mmc_options;

/* a_out: d*d doubles. iterations, converged may be NULL. */
ROCSIM_API rocsim_status rocsim_mmc(const rocsim_dataset* ds, const rocsim_mmc_options* opts, double* a_out,
                                    uint64_t* iterations, int* converged);

typedef struct rocsim_run_overrides {
  int has_seed;
  uint64_t seed;
  unsigned workers;       /* 0: keep config value */
  const char* output_dir; /* NULL: keep config value */
} rocsim_run_overrides;

/* report: one problem per line, empty when valid. Returns
 * ROCSIM_ERR_INVALID_INPUT when problems were found. */
ROCSIM_API rocsim_status rocsim_validate_config(const char* path, char** report);
/* Runs the experiment; summary receives run.json. A partial run returns
 * ROCSIM_ERR_NUMERICAL and still fills summary. overrides may be NULL. */
ROCSIM_API rocsim_status rocsim_run(const char* config_path, const rocsim_run_overrides* overrides, char** summary);
/* info: JSON with magic, dims, count, item_size. */
ROCSIM_API rocsim_status rocsim_idx_info(const char* path, char** info);

#ifdef __cplusplus
}
#endif

#endif
