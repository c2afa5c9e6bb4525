/*
 * Copyright 2026 The rankagg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RANKAGG_RANKAGG_H_
#define RANKAGG_RANKAGG_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RANKAGG_API __declspec(dllexport)
#else
#define RANKAGG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rankagg_status {
  RANKAGG_OK = 0,
  RANKAGG_E_INVALID_ARGUMENT = 1,
  RANKAGG_E_DOMAIN = 2,
  RANKAGG_E_DIMENSION = 3,
  RANKAGG_E_DIVERGENCE = 4,
  RANKAGG_E_DEGENERATE = 5,
  RANKAGG_E_PARSE = 6,
  RANKAGG_E_UNDEFINED_METRIC = 7,
  RANKAGG_E_NONCONVERGENCE = 8,
  RANKAGG_E_IO = 9,
  RANKAGG_E_UNKNOWN_KEY = 10,
  RANKAGG_E_INTERNAL = 11,
} rankagg_status;

typedef struct rankagg_config rankagg_config;
typedef struct rankagg_synth_spec rankagg_synth_spec;
typedef struct rankagg_dataset rankagg_dataset;
typedef struct rankagg_result rankagg_result;

/* Message of the last failed call on this thread; "" after a success. */
RANKAGG_API const char* rankagg_last_error(void);
RANKAGG_API const char* rankagg_status_name(rankagg_status status);
RANKAGG_API const char* rankagg_version(void);

/* "trace", "debug", "info", "warn", "error", "off". The level is also read
   from the RANKAGG_LOG environment variable when the library loads. */
RANKAGG_API rankagg_status rankagg_set_log_level(const char* level);

/* Aggregation settings. Keys and values are text:
     family              both divergences: gaussian | kl | poisson (and the
                         long names squared_euclidean, generalized_i)
     phi_r, phi_z        one side only
     lambda, epsilon_margin, outer_tol, positive_floor      positive reals
     outer_max_iter, stable_orders, covariate_restarts,
     inner_max_iter                                          integers
     inner_tol, glm_tol                                      positive reals
     init_method         a baseline name, see rankagg_method_names
     reg_beta, reg_omega "none", "ridge:<s>" or "lasso:<s>"
     letor_start, rank_start   warm | cold | best
     list_scale          scores | ranks
   Unknown keys fail with RANKAGG_E_UNKNOWN_KEY. */
RANKAGG_API rankagg_status rankagg_config_create(rankagg_config** out);
RANKAGG_API void rankagg_config_destroy(rankagg_config* config);
RANKAGG_API rankagg_status rankagg_config_set(rankagg_config* config,
                                              const char* key,
                                              const char* value);

/* Synthetic instance settings:
     family       gaussian | poisson
     n, d, n_spurious, seed                                  integers
     corruption   comma list of kind:magnitude with kind in translation,
                  additive, multiplicative, pure_noise */
RANKAGG_API rankagg_status rankagg_synth_spec_create(rankagg_synth_spec** out);
RANKAGG_API void rankagg_synth_spec_destroy(rankagg_synth_spec* spec);
RANKAGG_API rankagg_status rankagg_synth_spec_set(rankagg_synth_spec* spec,
                                                  const char* key,
                                                  const char* value);

/* A single-query dataset with known true scores. */
RANKAGG_API rankagg_status rankagg_synth_generate(const rankagg_synth_spec* spec,
                                                  rankagg_dataset** out);

/* LETOR text file; column_map is "mq", "ohsumed" or "x=1-3,7;r=4-6". */
RANKAGG_API rankagg_status rankagg_dataset_load_letor(const char* path,
                                                      const char* column_map,
                                                      rankagg_dataset** out);
RANKAGG_API void rankagg_dataset_destroy(rankagg_dataset* dataset);

RANKAGG_API size_t rankagg_dataset_query_count(const rankagg_dataset* dataset);
RANKAGG_API rankagg_status rankagg_dataset_query_shape(
    const rankagg_dataset* dataset, size_t query, size_t* items,
    size_t* features, size_t* lists);
/* The returned string lives as long as the dataset. */
RANKAGG_API const char* rankagg_dataset_query_id(const rankagg_dataset* dataset,
                                                 size_t query);
/* Fails with RANKAGG_E_INVALID_ARGUMENT when the query has no grades. */
RANKAGG_API rankagg_status rankagg_dataset_relevance(
    const rankagg_dataset* dataset, size_t query, int* out, size_t len);
/* Synthetic datasets only. */
RANKAGG_API rankagg_status rankagg_dataset_true_scores(
    const rankagg_dataset* dataset, size_t query, double* out, size_t len);
/* Appends one rank-list column to a query. */
RANKAGG_API rankagg_status rankagg_dataset_augment(rankagg_dataset* dataset,
                                                   size_t query,
                                                   const double* scores,
                                                   size_t len);

/* Comma-separated names accepted by rankagg_score: "mr" and the baselines. */
RANKAGG_API const char* rankagg_method_names(void);
RANKAGG_API int rankagg_method_valid(const char* name);

/* Scores one query with a baseline, or with MR-RankAgg under config ("mr");
   config may be NULL for baselines. Higher is better. */
RANKAGG_API rankagg_status rankagg_score(const rankagg_config* config,
                                         const rankagg_dataset* dataset,
                                         size_t query, const char* method,
                                         double* out, size_t len);

/* Full MR-RankAgg run on one query. */
RANKAGG_API rankagg_status rankagg_aggregate(const rankagg_config* config,
                                             const rankagg_dataset* dataset,
                                             size_t query,
                                             rankagg_result** out);
RANKAGG_API void rankagg_result_destroy(rankagg_result* result);

typedef struct rankagg_summary {
  size_t items;
  size_t lists;
  size_t steps;           /* recorded outer iterations of the final run */
  int total_iterations;   /* over all runs, restarts included */
  int restarts;
  int converged;
  double coupled_cost;
} rankagg_summary;

RANKAGG_API rankagg_status rankagg_result_summary(const rankagg_result* result,
                                                  rankagg_summary* out);
/* Position scores of the consensus order. */
RANKAGG_API rankagg_status rankagg_result_consensus(const rankagg_result* result,
                                                    double* out, size_t len);
RANKAGG_API rankagg_status rankagg_result_step_consensus(
    const rankagg_result* result, size_t step, double* out, size_t len);
/* Coupled cost, r-side cost and z-side cost after a step, and whether a
   range margin fired during it. */
RANKAGG_API rankagg_status rankagg_result_step_cost(const rankagg_result* result,
                                                    size_t step, double* coupled,
                                                    double* r_cost,
                                                    double* z_cost,
                                                    int* margin);
RANKAGG_API rankagg_status rankagg_result_expert_weights(
    const rankagg_result* result, double* out, size_t len);
RANKAGG_API const char* rankagg_result_diagnostic(const rankagg_result* result);

RANKAGG_API rankagg_status rankagg_kendall_tau(const double* a, const double* b,
                                               size_t n, double* out);
RANKAGG_API rankagg_status rankagg_spearman_rho(const double* a, const double* b,
                                                size_t n, double* out);
RANKAGG_API rankagg_status rankagg_ndcg(const double* predicted,
                                        const int* relevance, size_t n,
                                        size_t k, double* out);

#define RANKAGG_SELFTEST_MUTANT_POOLING 1u

/* Runs the built-in oracle checks. *passed is 1 iff all pass. *report is a
   JSON document owned by the caller; free it with rankagg_string_free. */
RANKAGG_API rankagg_status rankagg_selftest(uint64_t seed, unsigned flags,
                                            int* passed, char** report);
RANKAGG_API void rankagg_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif  // RANKAGG_RANKAGG_H_
