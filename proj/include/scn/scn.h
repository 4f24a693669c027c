/* C interface to the small-cell network analysis library. */
#ifndef SCN_SCN_H
#define SCN_SCN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SCN_API __declspec(dllexport)
#else
#define SCN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum scn_status {
    SCN_OK = 0,
    SCN_ERR_INVALID_ARGUMENT = 1,
    SCN_ERR_INVALID_INTERVAL = 2,
    SCN_ERR_NON_CONVERGENCE = 3,
    SCN_ERR_NO_BRACKET = 4,
    SCN_ERR_NON_POSITIVE_DISTANCE = 5,
    SCN_ERR_NON_POSITIVE_LAPLACE_ARG = 6,
    SCN_ERR_EXPONENT_TOO_SMALL = 7,
    SCN_ERR_INVALID_MODEL = 8,
    SCN_ERR_EMPTY_GRID = 9,
    SCN_ERR_NUMERICAL_INCONSISTENCY = 10,
    SCN_ERR_DEGENERATE_WINDOW = 11,
    SCN_ERR_CONFIG = 12,
    SCN_ERR_IO = 13,
    SCN_ERR_INTERNAL = 99
} scn_status;

typedef enum scn_path { SCN_PATH_LOS = 0, SCN_PATH_NLOS = 1 } scn_path;

/* Message of the last failing call on this thread ("" if none). */
SCN_API const char* scn_last_error(void);
SCN_API const char* scn_status_name(scn_status status);

/* ---- path loss ---- */

typedef struct scn_model scn_model;

typedef struct scn_case1_params {
    double d1_km;
    double alpha_los;
    double alpha_nlos;
    double a_los; /* linear */
    double a_nlos;
} scn_case1_params;

SCN_API void scn_case1_params_default(scn_case1_params* out);
/* params may be NULL for the defaults. */
SCN_API scn_status scn_model_3gpp_case1(const scn_case1_params* params, scn_model** out);
SCN_API scn_status scn_model_single_slope(double alpha, double amplitude, scn_model** out);
SCN_API void scn_model_free(scn_model* model);

SCN_API scn_status scn_model_zeta(const scn_model* model, scn_path path, double r_km, double* out);
SCN_API scn_status scn_model_los_probability(const scn_model* model, double r_km, double* out);
SCN_API scn_status scn_model_r1(const scn_model* model, double r_km, double* out);
SCN_API scn_status scn_model_r2(const scn_model* model, double r_km, double* out);

typedef struct scn_network {
    double lambda_bs;      /* BSs/km^2 */
    double rho_ue;         /* UEs/km^2, INFINITY for full load */
    double tx_power_mw;
    double noise_power_mw;
} scn_network;

SCN_API void scn_network_default(scn_network* out);

/* ---- serving-distance distributions ---- */

typedef struct scn_distances scn_distances;

SCN_API scn_status scn_distances_create(const scn_model* model, double lambda_bs, scn_distances** out);
SCN_API void scn_distances_free(scn_distances* dist);
SCN_API scn_status scn_distances_pdf(const scn_distances* dist, scn_path path, double r_km, double* out);
SCN_API scn_status scn_distances_cdf(const scn_distances* dist, scn_path path, double r_km, double* out);
SCN_API scn_status scn_distances_total_mass(const scn_distances* dist, scn_path path, double* out);

/* ---- activated density ---- */

typedef struct scn_activation {
    double lambda_bs;
    double rho_ue;
    double upper_bound;
    double lower_bound;
    double approx;
    double q_used;
} scn_activation;

typedef struct scn_calibration {
    double q_star;
    double q_upper_limit;
    double mse;
    int used_grid_scan;
} scn_calibration;

SCN_API scn_status scn_lambda0(double lambda_bs, double rho_ue, double q, double* out);
SCN_API scn_status scn_activation_estimate(const scn_distances* dist, double rho_ue, double q, scn_activation* out);
SCN_API scn_status scn_calibrate_q_star(const scn_model* model, double rho_ue, const double* lambda_grid,
                                        const double* mc_activated, size_t count, scn_calibration* out);

/* ---- coverage and ASE ---- */

SCN_API scn_status scn_laplace_interference(const scn_model* model, const scn_network* net, double lambda_tilde,
                                            scn_path serving_path, double r_km, double s, double* out);
SCN_API scn_status scn_conditional_coverage(const scn_model* model, const scn_network* net, double lambda_tilde,
                                            double gamma, scn_path serving_path, double r_km, double* out);
/* dist must have been built for net->lambda_bs. */
SCN_API scn_status scn_coverage_probability(const scn_distances* dist, const scn_network* net, double lambda_tilde,
                                            double gamma, double* out);
SCN_API scn_status scn_ase(const scn_distances* dist, const scn_network* net, double lambda_tilde, double gamma0,
                           double* out);

/* ---- Monte Carlo ---- */

typedef struct scn_sim scn_sim;

typedef struct scn_estimate {
    double value;
    double std_error;
} scn_estimate;

typedef struct scn_trial {
    double sinr_linear;
    scn_path serving_path;
    double serving_distance_km;
    uint64_t activated_bs_count;
    uint64_t total_bs_count;
} scn_trial;

/* window_side_km = 0 picks the default window. gammas (linear) may be NULL. */
SCN_API scn_status scn_sim_create(const scn_model* model, const scn_network* net, double window_side_km,
                                  uint64_t trials, uint64_t seed, const double* gammas, size_t gamma_count,
                                  scn_sim** out);
SCN_API void scn_sim_free(scn_sim* sim);
SCN_API scn_status scn_sim_window_side(const scn_sim* sim, double* out);
SCN_API scn_status scn_sim_trial(const scn_sim* sim, uint64_t trial_seed, scn_trial* out);
/* Runs every trial and keeps the outcomes; workers = 0 uses all cores. */
SCN_API scn_status scn_sim_run(scn_sim* sim, unsigned workers);
SCN_API scn_status scn_sim_outcome(const scn_sim* sim, size_t index, scn_trial* out);
SCN_API scn_status scn_sim_coverage(const scn_sim* sim, size_t gamma_index, scn_estimate* out);
SCN_API scn_status scn_sim_activated_density(const scn_sim* sim, scn_estimate* out);
SCN_API scn_status scn_sim_rate_density(const scn_sim* sim, double gamma0, scn_estimate* out);
SCN_API scn_status scn_sim_write_trials_csv(const scn_sim* sim, const char* path);

/* ---- experiment configuration and sweeps ---- */

typedef struct scn_config scn_config;
typedef struct scn_sweep scn_sweep;

SCN_API scn_status scn_config_default(scn_config** out);
SCN_API scn_status scn_config_load(const char* path, scn_config** out);
SCN_API void scn_config_free(scn_config* cfg);
/* "key=value" */
SCN_API scn_status scn_config_set(scn_config* cfg, const char* assignment);
SCN_API scn_status scn_config_q_star(const scn_config* cfg, double* out);
/* Rewrites one key of a config file in place. */
SCN_API scn_status scn_config_update_file(const char* path, const char* key, const char* value);

/* scenarios: comma-separated tags, e.g. "3gpp-case1-imc,3gpp-case1-fullload". */
SCN_API scn_status scn_sweep_coverage(const scn_config* cfg, const char* scenarios, scn_sweep** out);
SCN_API scn_status scn_sweep_density(const scn_config* cfg, const char* scenario, scn_sweep** out);
SCN_API scn_status scn_sweep_ase(const scn_config* cfg, const char* scenarios, scn_sweep** out);
SCN_API scn_status scn_sweep_read_csv(const char* path, scn_sweep** out);
SCN_API scn_status scn_sweep_write_csv(const scn_sweep* sweep, const char* path);
SCN_API void scn_sweep_free(scn_sweep* sweep);
SCN_API size_t scn_sweep_row_count(const scn_sweep* sweep);
/* *present is 0 for an empty cell. Column names follow the CSV header. */
SCN_API scn_status scn_sweep_value(const scn_sweep* sweep, size_t row, const char* column, double* out,
                                   int* present);
SCN_API const char* scn_sweep_scenario(const scn_sweep* sweep, size_t row);
SCN_API const char* scn_sweep_summary(const scn_sweep* sweep);

/* Monte Carlo q* fit. report_path may be NULL. */
SCN_API scn_status scn_calibrate(const scn_config* cfg, const char* scenario, const char* report_path,
                                 scn_calibration* out);

#ifdef __cplusplus
}
#endif

#endif
