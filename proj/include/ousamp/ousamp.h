/* SPDX-License-Identifier: Apache-2.0 */
#ifndef OUSAMP_OUSAMP_H
#define OUSAMP_OUSAMP_H

/*
 * C interface to the ousamp library: threshold sampling of an
 * Ornstein-Uhlenbeck signal over a FCFS channel with random delay.
 *
 * Functions return an ousamp_status; on failure ousamp_last_error() holds a
 * message for the calling thread. Text results are owned by an
 * ousamp_result and released with ousamp_result_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define OUSAMP_API __declspec(dllexport)
#else
#define OUSAMP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ousamp_status {
    OUSAMP_OK = 0,
    OUSAMP_ERR_DOMAIN = 1,
    OUSAMP_ERR_OVERFLOW = 2,
    OUSAMP_ERR_ORDER = 3,
    OUSAMP_ERR_STALE = 4,
    OUSAMP_ERR_NONCONVERGENCE = 5,
    OUSAMP_ERR_BRACKET = 6,
    OUSAMP_ERR_CONFIG = 7,
    OUSAMP_ERR_IO = 8,
    OUSAMP_ERR_INVALID_ARGUMENT = 9,
    OUSAMP_ERR_INTERNAL = 10
} ousamp_status;

typedef struct ousamp_experiment ousamp_experiment;
typedef struct ousamp_result ousamp_result;

OUSAMP_API const char* ousamp_version(void);
OUSAMP_API const char* ousamp_status_string(ousamp_status status);
/* Message of the last failed call on this thread; empty if none. */
OUSAMP_API const char* ousamp_last_error(void);

/* Experiments */
OUSAMP_API ousamp_status ousamp_experiment_from_json(const char* json, ousamp_experiment** out);
OUSAMP_API ousamp_status ousamp_experiment_from_file(const char* path, ousamp_experiment** out);
OUSAMP_API ousamp_status ousamp_experiment_set_seed(ousamp_experiment* exp, uint64_t seed);
OUSAMP_API ousamp_status ousamp_experiment_set_threads(ousamp_experiment* exp, unsigned threads);
/* Writes the 16-hex-digit configuration hash plus terminator into buf[17]. */
OUSAMP_API ousamp_status ousamp_experiment_hash(const ousamp_experiment* exp, char buf[17]);
OUSAMP_API void ousamp_experiment_free(ousamp_experiment* exp);

OUSAMP_API ousamp_status ousamp_run_solve(const ousamp_experiment* exp, ousamp_result** out);
OUSAMP_API ousamp_status ousamp_run_simulate(const ousamp_experiment* exp, ousamp_result** out);
/* The result text is the CSV; ousamp_result_aux holds the gnuplot data. */
OUSAMP_API ousamp_status ousamp_run_sweep_fig2(const ousamp_experiment* exp, ousamp_result** out);
/* Returns OUSAMP_OK with *passed set; the result text is the report. */
OUSAMP_API ousamp_status ousamp_run_selftest(unsigned threads, int* passed, ousamp_result** out);

OUSAMP_API const char* ousamp_result_text(const ousamp_result* r);
OUSAMP_API size_t ousamp_result_size(const ousamp_result* r);
OUSAMP_API const char* ousamp_result_aux(const ousamp_result* r);
OUSAMP_API void ousamp_result_free(ousamp_result* r);

/* Special functions */
OUSAMP_API ousamp_status ousamp_erfi(double x, double* out);
OUSAMP_API ousamp_status ousamp_dawson(double x, double* out);
OUSAMP_API ousamp_status ousamp_g(double x, double* out);
OUSAMP_API ousamp_status ousamp_k(double x, double* out);
OUSAMP_API ousamp_status ousamp_g_inv(double y, double* out);
OUSAMP_API ousamp_status ousamp_k_inv(double y, double* out);
OUSAMP_API ousamp_status ousamp_kummer_1f1(double z, double* out);

/* Threshold v(beta) for the signal (theta, mu, sigma) given the lower bound mse_y. */
OUSAMP_API ousamp_status ousamp_threshold_v(double beta, double theta, double mu, double sigma,
                                            double mse_y, double* out);

#ifdef __cplusplus
}
#endif

#endif /* OUSAMP_OUSAMP_H */
