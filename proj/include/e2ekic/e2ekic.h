#ifndef E2EKIC_H
#define E2EKIC_H

/*
 * C interface to the chain-relay known-interference-cancellation simulator.
 *
 * Every function returns an e2ekic_status; outputs go through pointer
 * arguments.  On failure e2ekic_last_error() gives a message for the calling
 * thread.  Objects returned through *_create functions are owned by the
 * caller and released with the matching *_free (safe on NULL).
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum e2ekic_status {
    E2EKIC_OK = 0,
    E2EKIC_ERR_INVALID_ARGUMENT = 1,
    E2EKIC_ERR_CONFIG = 2,
    E2EKIC_ERR_INFEASIBLE = 3,
    E2EKIC_ERR_INTERNAL = 4,
    E2EKIC_ERR_TERM_BUDGET = 5,
    E2EKIC_ERR_IO = 6
} e2ekic_status;

/* Message for the most recent failure on this thread; empty string if none. */
const char* e2ekic_last_error(void);

/* Node reported by the most recent E2EKIC_ERR_INFEASIBLE, or 0. */
int e2ekic_last_infeasible_node(void);

typedef struct e2ekic_model e2ekic_model;
typedef struct e2ekic_schedule e2ekic_schedule;
typedef struct e2ekic_expr e2ekic_expr;
typedef struct e2ekic_config e2ekic_config;

/* ------------------------------------------------------------------ */
/* Channel model                                                      */
/* ------------------------------------------------------------------ */

/* Equally spaced chain with unit adjacent-hop gain, |h_ji|^2 = (i-j)^-alpha,
 * and noise power sigma^2 = tx_power * 10^(-single_hop_snr_db/10). */
e2ekic_status e2ekic_model_create(int n, double alpha, double spacing,
                                  double tx_power, double single_hop_snr_db,
                                  e2ekic_model** out);

/* Same geometry with an explicit noise power (0 for noiseless studies). */
e2ekic_status e2ekic_model_create_sigma(int n, double alpha, double spacing,
                                        double tx_power, double noise_power,
                                        e2ekic_model** out);

void e2ekic_model_free(e2ekic_model* model);

e2ekic_status e2ekic_model_gain(const e2ekic_model* model, int j, int i,
                                double* re, double* im);
e2ekic_status e2ekic_model_noise_power(const e2ekic_model* model, double* out);
e2ekic_status e2ekic_model_snr_single_hop_db(const e2ekic_model* model, int i,
                                             double* out);

/* ------------------------------------------------------------------ */
/* Schedules and delays                                               */
/* ------------------------------------------------------------------ */

/* Every node runs m cancellation rounds. */
e2ekic_status e2ekic_schedule_uniform(const e2ekic_model* model, int m,
                                      e2ekic_schedule** out);

/* Per-node minimal rounds meeting the linear threshold gamma; fails with
 * E2EKIC_ERR_INFEASIBLE (and e2ekic_last_infeasible_node) if some node can
 * never decode. */
e2ekic_status e2ekic_schedule_adaptive(const e2ekic_model* model,
                                       double gamma_linear,
                                       e2ekic_schedule** out);

void e2ekic_schedule_free(e2ekic_schedule* schedule);

e2ekic_status e2ekic_schedule_delay(const e2ekic_schedule* schedule, int i,
                                    int64_t* out);
e2ekic_status e2ekic_schedule_rounds(const e2ekic_schedule* schedule, int i,
                                     int* out);

/* Closed-form relay delay: i-1 slots when m = 0, ((m+1)^(i-1) - 1)/m else. */
e2ekic_status e2ekic_delay_closed_form(int i, int m, int64_t* out);

/* ------------------------------------------------------------------ */
/* Received signals and cancellation                                  */
/* ------------------------------------------------------------------ */

e2ekic_status e2ekic_received_signal(const e2ekic_model* model,
                                     const e2ekic_schedule* schedule, int i,
                                     int64_t t, e2ekic_expr** out);

/* m rounds of cancellation at node i (steady-state slot). Any output pointer
 * may be NULL if the value is not needed. */
e2ekic_status e2ekic_cancel_recursive(const e2ekic_model* model,
                                      const e2ekic_schedule* schedule, int i,
                                      int m, e2ekic_expr** expr_out,
                                      double* sinr_db, int64_t* slots_waited);

/* Closed-form expansion of the same residual; term_budget caps the
 * (i-2)^(m+1) tuple count. */
e2ekic_status e2ekic_cancel_expanded(const e2ekic_model* model,
                                     const e2ekic_schedule* schedule, int i,
                                     int m, uint64_t term_budget,
                                     e2ekic_expr** out);

void e2ekic_expr_free(e2ekic_expr* expr);

e2ekic_status e2ekic_expr_term_count(const e2ekic_expr* expr, size_t* out);
e2ekic_status e2ekic_expr_data_coef(const e2ekic_expr* expr, int64_t slot,
                                    double* re, double* im);
e2ekic_status e2ekic_expr_noise_coef(const e2ekic_expr* expr, int node,
                                     int64_t slot, double* re, double* im);

/* Sorted text form, one term per line.  Writes up to cap-1 bytes plus a NUL;
 * *needed receives the full length excluding the NUL.  buf may be NULL when
 * cap is 0 (size query). */
e2ekic_status e2ekic_expr_dump(const e2ekic_expr* expr, char* buf, size_t cap,
                               size_t* needed);

e2ekic_status e2ekic_power_split(const e2ekic_expr* expr, int64_t useful_slot,
                                 double tx_power, double noise_power,
                                 double* useful, double* interference,
                                 double* noise);

/* true iff linear SINR meets the linear threshold gamma. */
e2ekic_status e2ekic_decode(double sinr_db, double gamma_linear, int* out);

/* ------------------------------------------------------------------ */
/* Closed-form analysis                                               */
/* ------------------------------------------------------------------ */

e2ekic_status e2ekic_rho(const e2ekic_model* model, int i, double* out);
e2ekic_status e2ekic_interference_bound(const e2ekic_model* model, int i, int m,
                                        double* out);
e2ekic_status e2ekic_sinr_lower_bound_db(const e2ekic_model* model, int i,
                                         int m, double* out);
e2ekic_status e2ekic_feasible(const e2ekic_model* model, int i,
                              double gamma_linear, int* out);

/* *out = minimal rounds meeting gamma, or -1 when infeasible. */
e2ekic_status e2ekic_min_rounds(const e2ekic_model* model, int i,
                                double gamma_linear, int* out);

e2ekic_status e2ekic_max_chain_length(double alpha, double epsilon, long* out);

/* ------------------------------------------------------------------ */
/* Monte Carlo validation                                             */
/* ------------------------------------------------------------------ */

typedef enum e2ekic_symbol_model {
    E2EKIC_SYMBOL_CIRCULAR_GAUSSIAN = 0,
    E2EKIC_SYMBOL_QPSK = 1
} e2ekic_symbol_model;

e2ekic_status e2ekic_monte_carlo(const e2ekic_model* model,
                                 const e2ekic_schedule* schedule, int i, int m,
                                 uint64_t trials, uint64_t seed,
                                 e2ekic_symbol_model symbol_model,
                                 double* pred_residual, double* emp_residual,
                                 double* rel_error);

/* ------------------------------------------------------------------ */
/* Experiment configuration and figure datasets                       */
/* ------------------------------------------------------------------ */

e2ekic_status e2ekic_config_default(e2ekic_config** out);
e2ekic_status e2ekic_config_load(const char* path, e2ekic_config** out);
void e2ekic_config_free(e2ekic_config* config);

e2ekic_status e2ekic_config_set_output_dir(e2ekic_config* config,
                                           const char* dir);
e2ekic_status e2ekic_config_set_seed(e2ekic_config* config, uint64_t seed);
e2ekic_status e2ekic_config_output_dir(const e2ekic_config* config, char* buf,
                                       size_t cap, size_t* needed);

/* Each command writes its CSV file(s) under the config's output directory:
 *   sinr sweep    sinr_sweep.csv
 *   delay table   delay_table.csv (+ delay_adaptive.csv under adaptive_min)
 *   bounds report bounds_report.csv, max_chain_length.csv
 *   example n5    trace_n5.csv
 *   monte carlo   monte_carlo.csv
 */
e2ekic_status e2ekic_run_sinr_sweep(const e2ekic_config* config);
e2ekic_status e2ekic_run_delay_table(const e2ekic_config* config);
e2ekic_status e2ekic_run_bounds_report(const e2ekic_config* config);
e2ekic_status e2ekic_run_example_n5(const e2ekic_config* config);
e2ekic_status e2ekic_run_monte_carlo(const e2ekic_config* config);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* E2EKIC_H */
