/* Copyright 2026 The lgc Authors
 * SPDX-License-Identifier: Apache-2.0 */

/* C interface to the lgc library.
 *
 * Objects are opaque handles released with the matching *_free call.
 * Every function returns an lgc_status; on failure the message is
 * available from lgc_last_error() on the calling thread until the next
 * call on that thread. Vectors and matrices are caller-owned double
 * arrays; matrices are column-major with one basis vector per column. */

#ifndef LGC_LGC_H_
#define LGC_LGC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LGC_API __declspec(dllexport)
#else
#define LGC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lgc_status {
  LGC_OK = 0,
  LGC_NOT_SQUARE = 1,
  LGC_SINGULAR_BASIS = 2,
  LGC_UNKNOWN_NAME = 3,
  LGC_DIMENSION_MISMATCH = 4,
  LGC_BUDGET_EXCEEDED = 5,
  LGC_NONPOSITIVE_SIGMA = 6,
  LGC_DIMENSION_TOO_LARGE = 7,
  LGC_FLATNESS_TOO_LARGE = 8,
  LGC_MU_BELOW_ONE = 9,
  LGC_INSUFFICIENT_ERRORS = 10,
  LGC_RANK_DEFICIENT_CODE = 11,
  LGC_RANDOMNESS_EXHAUSTED = 12,
  LGC_INVALID_ARGUMENT = 13,
  LGC_PARSE = 14,
  LGC_IO = 15,
  LGC_CONFIG = 16,
  LGC_MULTIPLE_AXES = 17,
  LGC_NULL_ARGUMENT = 100,
  LGC_INTERNAL = 101
} lgc_status;

typedef struct lgc_lattice lgc_lattice;
typedef struct lgc_spec lgc_spec;
typedef struct lgc_code lgc_code;

LGC_API const char* lgc_version(void);
LGC_API const char* lgc_last_error(void);
LGC_API const char* lgc_status_name(lgc_status status);

/* Lattices. */
LGC_API lgc_status lgc_lattice_new(const double* basis, int n,
                                   lgc_lattice** out);
/* "Z8", "D4", "E8", "A2", ... */
LGC_API lgc_status lgc_lattice_standard(const char* name, lgc_lattice** out);
LGC_API lgc_status lgc_lattice_load(const char* path, lgc_lattice** out);
LGC_API lgc_status lgc_lattice_scaled(const lgc_lattice* lattice,
                                      double factor, lgc_lattice** out);
LGC_API lgc_status lgc_lattice_with_volume(const lgc_lattice* lattice,
                                           double volume, lgc_lattice** out);
LGC_API void lgc_lattice_free(lgc_lattice* lattice);
LGC_API int lgc_lattice_dim(const lgc_lattice* lattice);
LGC_API double lgc_lattice_volume(const lgc_lattice* lattice);
LGC_API lgc_status lgc_lattice_basis(const lgc_lattice* lattice, double* out);
/* Nearest point of L - shift to y; shift may be NULL. coeffs may be NULL. */
LGC_API lgc_status lgc_lattice_decode(const lgc_lattice* lattice,
                                      const double* shift, const double* y,
                                      int64_t* coeffs, double* point);

/* Theta series and flatness. */
LGC_API lgc_status lgc_theta(const lgc_lattice* lattice, double tau,
                             double* value, double* truncation_bound);
typedef struct lgc_flatness_result {
  double sigma;
  double gsnr;
  double epsilon;
  double theta;
  double truncation_bound;
} lgc_flatness_result;
LGC_API lgc_status lgc_flatness(const lgc_lattice* lattice, double sigma,
                                lgc_flatness_result* out);

/* Discrete Gaussian sampling over L - shift; shift may be NULL. */
LGC_API lgc_status lgc_spec_new(const lgc_lattice* lattice, double sigma0,
                                const double* shift, lgc_spec** out);
LGC_API void lgc_spec_free(lgc_spec* spec);
LGC_API double lgc_spec_truncation_radius(const lgc_spec* spec);
/* Writes count * n coefficients and count * n embedded points, row by row.
 * Either output may be NULL. */
LGC_API lgc_status lgc_sample(const lgc_spec* spec, uint64_t seed,
                              uint64_t stream, int64_t count, int64_t* coeffs,
                              double* points);

/* Simulations. */
typedef struct lgc_sim_result {
  int n;
  double sigma0;
  double sigma;
  double alpha;
  double sigma_tilde;
  double volume;
  double mu;
  int64_t trials;
  int64_t errors;
  double p_hat;
  double ci_low;
  double ci_high;
} lgc_sim_result;

LGC_API lgc_status lgc_simulate_error(const lgc_lattice* lattice,
                                      const double* shift, double sigma0,
                                      double sigma, int64_t trials,
                                      uint64_t seed, int threads,
                                      lgc_sim_result* out);
LGC_API lgc_status lgc_simulate_poltyrev(const lgc_lattice* lattice,
                                         double noise_sigma, int64_t trials,
                                         uint64_t seed, int threads,
                                         lgc_sim_result* out);

typedef struct lgc_sandwich_result {
  double ratio;
  double ratio_low;
  double ratio_high;
  double lo;
  double hi;
  double eps1;
  double eps2;
  int pass;
  lgc_sim_result scheme;
  lgc_sim_result poltyrev;
} lgc_sandwich_result;

LGC_API lgc_status lgc_sandwich(const lgc_lattice* lattice,
                                const double* shift, double sigma0,
                                double sigma, int64_t trials, uint64_t seed,
                                int threads, lgc_sandwich_result* out);

LGC_API lgc_status lgc_poltyrev_exponent(double mu, int n, double* exponent,
                                         double* bound);

typedef struct lgc_rate_result {
  double snr;
  double eps;
  double eps_prime;
  double eps_dprime;
  double capacity;
  double rate_lower;
} lgc_rate_result;

LGC_API lgc_status lgc_rate(const lgc_lattice* lattice, double sigma0,
                            double sigma, double eps_dprime,
                            lgc_rate_result* out);

/* Linear codes over F_p and Construction A. generator is k rows of n. */
LGC_API lgc_status lgc_code_new(int64_t p, int n, int k,
                                const int64_t* generator, lgc_code** out);
LGC_API lgc_status lgc_code_random(int64_t p, int n, int k, uint64_t seed,
                                   lgc_code** out);
LGC_API lgc_status lgc_code_load(const char* path, lgc_code** out);
LGC_API void lgc_code_free(lgc_code* code);
LGC_API lgc_status lgc_code_lift(const lgc_code* code, double scale,
                                 lgc_lattice** out);

/* Runs a config file as the command-line tool would. Any of out_path,
 * seed, trials and threads may be NULL to keep the config value. The
 * process-style exit code goes to *exit_code; the return value is LGC_OK
 * whenever the run was attempted. */
typedef struct lgc_run_options {
  const char* out_path;
  const uint64_t* seed;
  const int64_t* trials;
  const int* threads;
} lgc_run_options;

LGC_API lgc_status lgc_run(const char* config_path,
                           const lgc_run_options* options, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif /* LGC_LGC_H_ */
