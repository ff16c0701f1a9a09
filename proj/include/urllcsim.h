/*
 * Copyright (c) 2026 The urllcsim Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Public C API of the urllcsim shared library: a system-level downlink
 * simulator for URLLC/eMBB coexistence in an indoor factory deployment,
 * with a capacity-search harness on top.
 *
 * All objects are opaque handles; every call returns a usim_status and
 * usim_last_error() describes the most recent failure on the calling
 * thread. Handles are not thread-safe individually, but independent
 * handles may be used from different threads concurrently.
 */
#ifndef URLLCSIM_H
#define URLLCSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum usim_status {
  USIM_OK = 0,
  USIM_ERR_INVALID_ARG = 1,
  USIM_ERR_PARSE = 2,      /* malformed scenario or data file */
  USIM_ERR_VALIDATION = 3, /* invariant violated; message names the field */
  USIM_ERR_MISUSE = 4,     /* operation undefined for the current mode */
  USIM_ERR_INFEASIBLE = 5,
  USIM_ERR_INSUFFICIENT_SAMPLES = 6,
  USIM_ERR_IO = 7,
  USIM_ERR_INTERNAL = 8
} usim_status;

typedef struct usim_scenario usim_scenario; /* immutable, validated config */
typedef struct usim_result usim_result;     /* one finished simulation */

const char* usim_version(void);

/* Message for the last failing call on this thread; empty string if none. */
const char* usim_last_error(void);

/* ---- scenarios ---------------------------------------------------------- */

/* Default scenario (the documented baseline parameter set). */
usim_status usim_scenario_create(usim_scenario** out);

/* Parse `key = value` text ('#' comments); unknown keys are rejected. */
usim_status usim_scenario_load(const char* text, usim_scenario** out);
usim_status usim_scenario_load_file(const char* path, usim_scenario** out);

/* Apply one key=value override and revalidate. */
usim_status usim_scenario_set(usim_scenario* s, const char* key, const char* value);

/* Canonical value of one key, as text. */
usim_status usim_scenario_get(const usim_scenario* s, const char* key,
                              char* buf, size_t buflen);

/* 16-hex-digit hash of the canonical config (buf needs >= 17 bytes). */
usim_status usim_scenario_hash(const usim_scenario* s, char* buf, size_t buflen);

/* Average OFDM symbol duration in seconds (cyclic prefix included). */
usim_status usim_scenario_symbol_duration(const usim_scenario* s, double* out_s);

/* Total offered load C*K*B*8*lambda in bits/s; USIM_ERR_MISUSE for
 * best-effort traffic. */
usim_status usim_scenario_offered_load(const usim_scenario* s, double* out_bps);

/* Drop the deployment for this scenario and dump it for plotting. */
usim_status usim_scenario_write_topology_csv(const usim_scenario* s,
                                             const char* cells_path,
                                             const char* ues_path);

void usim_scenario_free(usim_scenario* s);

/* ---- simulation runs ---------------------------------------------------- */

usim_status usim_run(const usim_scenario* s, usim_result** out);

typedef struct usim_kpi {
  double mu_bps;            /* mean decoded throughput over the window */
  double drop_rate;         /* HARQ-exhaustion drops / resolved packets */
  double realized_bler;     /* first-transmission block error rate */
  uint64_t n_packets;       /* resolved post-warmup packets */
  uint64_t n_decoded;
  uint64_t n_dropped;
  uint64_t n_inflight;      /* unresolved at the horizon (whole run) */
  double window_s;          /* measurement window length */
} usim_kpi;

usim_status usim_result_kpi(const usim_result* r, usim_kpi* out);

/* Empirical (1-rho)-quantile of packet latency, drops counted as +inf.
 * USIM_ERR_INSUFFICIENT_SAMPLES when fewer than 100/rho samples exist. */
usim_status usim_result_outage_latency(const usim_result* r, double rho,
                                       double* out_s);

/* KPI summary as JSON evaluated at the given outage probabilities
 * (rhos may be NULL/0 to use the scenario's own rho).
 * Free the string with usim_string_free. */
usim_status usim_result_kpi_json(const usim_result* r, const double* rhos,
                                 size_t n_rhos, char** out_json);

usim_status usim_result_write_ledger_csv(const usim_result* r, const char* path);
usim_status usim_result_write_utilization_csv(const usim_result* r, const char* path);
usim_status usim_result_write_latency_ecdf_csv(const usim_result* r, const char* path);
usim_status usim_result_write_prb_ecdf_csv(const usim_result* r, const char* path);

void usim_result_free(usim_result* r);
void usim_string_free(char* s);

/* ---- capacity harness --------------------------------------------------- */

typedef struct usim_capacity_query {
  double phi_s;            /* latency target, seconds */
  double rho;              /* outage probability */
  double lambda_low;       /* per-UE packets/s search bounds */
  double lambda_high;
  double rel_tolerance;    /* bracket width target, relative (0, 0.5) */
  uint64_t min_packets;    /* decoded packets per probe */
} usim_capacity_query;

typedef struct usim_capacity_result {
  double lambda_star;      /* per-UE packets/s */
  double omega_star_bps;   /* supported load, Eq. of the offered-load model */
  int32_t probes;
  int32_t noisy;               /* monotonicity violation persisted */
  int32_t upper_bound_feasible; /* constraint never bound in the bracket */
} usim_capacity_result;

/* Bisection on lambda. USIM_ERR_INFEASIBLE when lambda_low already fails;
 * USIM_ERR_INSUFFICIENT_SAMPLES when min_packets < 100/rho. */
usim_status usim_capacity_search(const usim_scenario* s,
                                 const usim_capacity_query* query,
                                 usim_capacity_result* out);

/* Full-buffer reference throughput; scheduler is "pf" or "et". */
usim_status usim_be_baseline(const usim_scenario* s, const char* scheduler,
                             double* out_mu_bps);

/* Throughput cost (1 - mu_urllc/mu_be) * 100, percent. */
usim_status usim_throughput_cost(double mu_urllc_bps, double mu_be_bps,
                                 double* out_pct);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* URLLCSIM_H */
