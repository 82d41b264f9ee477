// Copyright 2026 The cocycle-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// C interface to the cocycle-lab core. All functions return a cl_status;
// on failure cl_last_error() holds a message for the calling thread.

#ifndef COCYCLE_LAB_H_
#define COCYCLE_LAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CL_API __declspec(dllexport)
#else
#define CL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cl_status {
  CL_OK = 0,
  CL_ERR_PARAM = 1,
  CL_ERR_CONFIG = 2,
  CL_ERR_NUMERICAL = 3,
  CL_ERR_UNSUPPORTED = 4,
  CL_ERR_DOMAIN = 5,
  CL_ERR_IO = 6,
  CL_ERR_INTERNAL = 7
} cl_status;

typedef struct cl_potential cl_potential;
typedef struct cl_config cl_config;

// q == 0 selects the irrational frequency `value`; otherwise p/q.
typedef struct cl_frequency {
  int64_t p;
  int64_t q;
  double value;
} cl_frequency;

typedef struct cl_le_result {
  double value;
  double stderr_;
  double convergence_gap;
  int64_t n_steps;
} cl_le_result;

typedef struct cl_rotation_result {
  double rho;
  double rho_bar;
  double dos;
  double convergence_gap;
} cl_rotation_result;

CL_API const char* cl_last_error(void);
CL_API const char* cl_version(void);

// Exit code convention of the command line tool (0, 2 or 3).
CL_API int cl_exit_code(cl_status status);

CL_API cl_status cl_potential_zero(cl_potential** out);
CL_API cl_status cl_potential_poisson_peak(double K, double lambda, cl_potential** out);
CL_API cl_status cl_potential_peaky_bump(double lo, double hi, double K, double sharpness,
                                         cl_potential** out);
CL_API void cl_potential_free(cl_potential* v);
CL_API cl_status cl_potential_eval(const cl_potential* v, double x, double* out);

CL_API cl_status cl_le_estimate(const cl_potential* v, double e, cl_frequency alpha,
                                int64_t n, int phases, uint64_t seed, double nu,
                                cl_le_result* out);
CL_API cl_status cl_rotation_number(const cl_potential* v, double e, cl_frequency alpha,
                                    int64_t n, cl_rotation_result* out);
CL_API cl_status cl_herman_lower_bound(double K, double lambda, double e, double* out);
CL_API cl_status cl_trace_closed_form(const cl_potential* v, double e, int64_t q, double x,
                                      double* out);
CL_API cl_status cl_uh_test(const cl_potential* v, double e, double alpha, uint64_t seed,
                            int* uniformly_hyperbolic);
// |alpha - k/l| >= eta / l^sigma for 1 <= l <= cap.
CL_API cl_status cl_dc1_membership(double alpha, double eta, double sigma, int64_t cap,
                                   int* member);

CL_API cl_status cl_config_load_file(const char* path, cl_config** out);
CL_API cl_status cl_config_load_string(const char* text, cl_config** out);
CL_API cl_status cl_config_new(cl_config** out);
// key is "section.key".
CL_API cl_status cl_config_set(cl_config* cfg, const char* key, const char* value);
CL_API void cl_config_free(cl_config* cfg);

// Runs a subcommand and writes its CSV to out_path (stdout when NULL or "-").
// A NULL seed keeps run.seed; threads == 0 keeps run.threads (default 1).
CL_API cl_status cl_run(const cl_config* cfg, const char* subcommand, const char* out_path,
                        const uint64_t* seed, unsigned threads);

// NULL-terminated list of subcommand names.
CL_API const char* const* cl_subcommands(void);

// NULL-terminated list of accepted "section.key" names.
CL_API const char* const* cl_config_keys(void);

#ifdef __cplusplus
}
#endif

#endif  // COCYCLE_LAB_H_
