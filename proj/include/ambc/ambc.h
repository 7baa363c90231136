// SPDX-License-Identifier: Apache-2.0
//
// ambc-chest: channel estimation for ambient backscatter readers with large ULAs
// Copyright (C) 2026 The ambc-chest authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/*
 * C interface to the ambc channel-estimation library.
 *
 * All functions return an ambc_status; on failure a description of the most
 * recent error on the calling thread is available from ambc_last_error().
 * Handles are opaque and owned by the caller; release them with the matching
 * *_destroy function. Strings returned through char** must be released with
 * ambc_string_free().
 *
 * Complex arrays are interleaved (re, im) doubles. Matrices are column-major.
 */

#ifndef AMBC_H
#define AMBC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(AMBC_BUILDING_LIBRARY)
#    define AMBC_API __declspec(dllexport)
#  else
#    define AMBC_API __declspec(dllimport)
#  endif
#else
#  define AMBC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ambc_status
{
    AMBC_OK = 0,
    AMBC_ERR_INVALID_ARGUMENT = 1,
    AMBC_ERR_DOMAIN = 2,
    AMBC_ERR_IO = 3,
    AMBC_ERR_SINGULAR_FISHER = 4,
    AMBC_ERR_DEGENERATE_GEOMETRY = 5,
    AMBC_ERR_ILL_CONDITIONED_PILOTS = 6,
    AMBC_ERR_EMPTY_INPUT = 7,
    AMBC_ERR_UNKNOWN_KEY = 8,
    AMBC_ERR_INTERNAL = 99
} ambc_status;

typedef enum ambc_format
{
    AMBC_FORMAT_CSV = 0,
    AMBC_FORMAT_JSON = 1
} ambc_format;

typedef struct ambc_config ambc_config; /* experiment configuration */
typedef struct ambc_table ambc_table;   /* sweep result table */

AMBC_API const char *ambc_version(void);
AMBC_API const char *ambc_last_error(void);
AMBC_API void ambc_string_free(char *s);

/* ---- configuration ---------------------------------------------------- */

/* Defaults: M = 128, d/lambda = 0.5, N = 1, eta = 0.5, sigma2 = 1,
   theta0 = -pi/4, theta1 = pi/5, SNR 0..30 dB in 5 dB steps. */
AMBC_API ambc_status ambc_config_create(ambc_config **out);
AMBC_API void ambc_config_destroy(ambc_config *cfg);

/* Applies a JSON config file (flat dotted keys) on top of the current values. */
AMBC_API ambc_status ambc_config_load(ambc_config *cfg, const char *path);

/* value is parsed as JSON when possible (numbers, lists, booleans), else used as a string. */
AMBC_API ambc_status ambc_config_set(ambc_config *cfg, const char *key, const char *value);

/* 1 when key names a configuration entry, else 0. */
AMBC_API int ambc_config_has_key(const char *key);

AMBC_API ambc_status ambc_config_to_json(const ambc_config *cfg, char **out_json);

/* ---- experiments ------------------------------------------------------ */

AMBC_API ambc_status ambc_run_mse_sweep(const ambc_config *cfg, ambc_table **out);
AMBC_API ambc_status ambc_run_outage_sweep(const ambc_config *cfg, ambc_table **out);

/* CRLB / LCRLB table at the configured nominal gains (channel.*) per SNR point.
   value = numeric CRLB, bound_crlb = closed form, bound_lcrlb = LCRLB. */
AMBC_API ambc_status ambc_run_bounds(const ambc_config *cfg, ambc_table **out);

/* One trial (index 0 of the seeded stream) at the first SNR point; JSON report. */
AMBC_API ambc_status ambc_run_estimate(const ambc_config *cfg, char **out_json);

typedef struct ambc_row
{
    const char *metric; /* valid while the table lives */
    double snr_db;
    double value;
    double bound_crlb;  /* NaN when absent */
    double bound_lcrlb; /* NaN when absent */
    int64_t trials;
    uint64_t seed;
} ambc_row;

AMBC_API void ambc_table_destroy(ambc_table *table);
AMBC_API size_t ambc_table_row_count(const ambc_table *table);
AMBC_API ambc_status ambc_table_row(const ambc_table *table, size_t index, ambc_row *out);

/* path "-" writes to stdout. */
AMBC_API ambc_status ambc_table_write(const ambc_table *table, ambc_format format, const char *path);

/* ---- direct access to the estimator and bounds ----------------------- */

typedef struct ambc_path_estimate
{
    int bin;      /* 1-based DFT bin */
    double delta; /* rotation, 0 for coarse estimates */
    double theta;
    double gain_re;
    double gain_im;
} ambc_path_estimate;

typedef struct ambc_estimate
{
    ambc_path_estimate direct;
    ambc_path_estimate backscatter; /* gain of h1 = eta h_st h_tr */
    ambc_path_estimate direct_coarse;
    ambc_path_estimate backscatter_coarse;
    double h1_over_eta_re;
    double h1_over_eta_im;
} ambc_estimate;

/* y0, y1: M x N frames for tag states 0 and 1 (2*M*N doubles each).
   pilots: N complex symbols (2*N doubles) of power pilot_power. */
AMBC_API ambc_status ambc_estimate_frames(int num_antennas, double spacing_ratio, int num_pilots,
                                          const double *pilots, double pilot_power, const double *y0,
                                          const double *y1, double eta, ambc_estimate *out);

typedef struct ambc_bound_inputs
{
    double abs_h0, abs_h1;
    double omega0, omega1;
    double theta0, theta1;
    double eta;
    int num_antennas;
    int num_pilots;
    double pilot_power;
    double sigma2;
    double spacing_ratio;
} ambc_bound_inputs;

/* Bound order: |h0|, |h1|/eta, theta0, theta1. fisher is row-major 4x4. */
typedef struct ambc_bounds
{
    double fisher[16];
    double crlb_numeric[4];
    double crlb_closed[4];
    double lcrlb[4];
    double state0[2]; /* |h0|, theta0 for the absorbing state */
} ambc_bounds;

AMBC_API ambc_status ambc_compute_bounds(const ambc_bound_inputs *in, ambc_bounds *out);

/* ---- self test -------------------------------------------------------- */

typedef void (*ambc_text_sink)(const char *text, void *user);

/* Runs the built-in checks; the report is passed to sink (may be NULL).
   *passed is set to 1 when every check succeeds. */
AMBC_API ambc_status ambc_selftest(ambc_text_sink sink, void *user, int *passed);

#ifdef __cplusplus
}
#endif

#endif
