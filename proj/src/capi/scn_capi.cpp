#include "scn/scn.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <string>

#include "scn/activation.hpp"
#include "scn/ase.hpp"
#include "scn/config.hpp"
#include "scn/coverage.hpp"
#include "scn/error.hpp"
#include "scn/montecarlo.hpp"
#include "scn/sweep.hpp"

struct scn_model {
    scn::PathLossModel model;
};

struct scn_distances {
    scn::DistanceDistributions dist;
};

struct scn_sim {
    scn::mc::SimConfig cfg;
    std::vector<scn::mc::TrialOutcome> outcomes;
};

struct scn_config {
    scn::ExperimentConfig cfg;
};

struct scn_sweep {
    scn::SweepResult result;
};

namespace {

thread_local std::string g_last_error;

scn_status to_status(scn::ErrorCode code) {
    using scn::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return SCN_ERR_INVALID_ARGUMENT;
        case ErrorCode::InvalidInterval: return SCN_ERR_INVALID_INTERVAL;
        case ErrorCode::NonConvergence: return SCN_ERR_NON_CONVERGENCE;
        case ErrorCode::NoBracket: return SCN_ERR_NO_BRACKET;
        case ErrorCode::NonPositiveDistance: return SCN_ERR_NON_POSITIVE_DISTANCE;
        case ErrorCode::NonPositiveLaplaceArg: return SCN_ERR_NON_POSITIVE_LAPLACE_ARG;
        case ErrorCode::ExponentTooSmall: return SCN_ERR_EXPONENT_TOO_SMALL;
        case ErrorCode::InvalidModel: return SCN_ERR_INVALID_MODEL;
        case ErrorCode::EmptyGrid: return SCN_ERR_EMPTY_GRID;
        case ErrorCode::NumericalInconsistency: return SCN_ERR_NUMERICAL_INCONSISTENCY;
        case ErrorCode::DegenerateWindow: return SCN_ERR_DEGENERATE_WINDOW;
        case ErrorCode::ConfigError: return SCN_ERR_CONFIG;
        case ErrorCode::IoError: return SCN_ERR_IO;
    }
    return SCN_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into a status plus the thread's last
// error message.
template <typename F>
scn_status guarded(F&& body) {
    try {
        body();
        g_last_error.clear();
        return SCN_OK;
    } catch (const scn::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return SCN_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SCN_ERR_INTERNAL;
    }
}

template <typename... Ptrs>
void require(Ptrs... ptrs) {
    if (((ptrs == nullptr) || ...)) scn::raise(scn::ErrorCode::InvalidArgument, "null pointer argument");
}

scn::Path to_path(scn_path p) {
    if (p == SCN_PATH_LOS) return scn::Path::LoS;
    if (p == SCN_PATH_NLOS) return scn::Path::NLoS;
    scn::raise(scn::ErrorCode::InvalidArgument, "unknown path value");
}

scn::NetworkConfig to_network(const scn_network* net) {
    scn::NetworkConfig out;
    out.lambda_bs = net->lambda_bs;
    out.rho_ue = net->rho_ue;
    out.tx_power_mw = net->tx_power_mw;
    out.noise_power_mw = net->noise_power_mw;
    out.validate();
    return out;
}

scn_trial to_trial(const scn::mc::TrialOutcome& o) {
    return scn_trial{o.sinr_linear, o.serving_path == scn::Path::LoS ? SCN_PATH_LOS : SCN_PATH_NLOS,
                     o.serving_distance_km, o.activated_bs_count, o.total_bs_count};
}

void require_outcomes(const scn_sim* sim) {
    if (sim->outcomes.empty()) scn::raise(scn::ErrorCode::InvalidArgument, "call scn_sim_run first");
}

}  // namespace

extern "C" {

const char* scn_last_error(void) { return g_last_error.c_str(); }

const char* scn_status_name(scn_status status) {
    switch (status) {
        case SCN_OK: return "OK";
        case SCN_ERR_INVALID_ARGUMENT: return "InvalidArgument";
        case SCN_ERR_INVALID_INTERVAL: return "InvalidInterval";
        case SCN_ERR_NON_CONVERGENCE: return "NonConvergence";
        case SCN_ERR_NO_BRACKET: return "NoBracket";
        case SCN_ERR_NON_POSITIVE_DISTANCE: return "NonPositiveDistance";
        case SCN_ERR_NON_POSITIVE_LAPLACE_ARG: return "NonPositiveLaplaceArg";
        case SCN_ERR_EXPONENT_TOO_SMALL: return "ExponentTooSmall";
        case SCN_ERR_INVALID_MODEL: return "InvalidModel";
        case SCN_ERR_EMPTY_GRID: return "EmptyGrid";
        case SCN_ERR_NUMERICAL_INCONSISTENCY: return "NumericalInconsistency";
        case SCN_ERR_DEGENERATE_WINDOW: return "DegenerateWindow";
        case SCN_ERR_CONFIG: return "ConfigError";
        case SCN_ERR_IO: return "IoError";
        case SCN_ERR_INTERNAL: return "Internal";
    }
    return "Unknown";
}

void scn_case1_params_default(scn_case1_params* out) {
    if (!out) return;
    const scn::Case1Parameters p;
    *out = scn_case1_params{p.d1_km, p.los_exponent, p.nlos_exponent, p.los_amplitude, p.nlos_amplitude};
}

scn_status scn_model_3gpp_case1(const scn_case1_params* params, scn_model** out) {
    return guarded([&] {
        require(out);
        scn::Case1Parameters p;
        if (params) {
            p.d1_km = params->d1_km;
            p.los_exponent = params->alpha_los;
            p.nlos_exponent = params->alpha_nlos;
            p.los_amplitude = params->a_los;
            p.nlos_amplitude = params->a_nlos;
        }
        *out = new scn_model{scn::make_3gpp_case1(p)};
    });
}

scn_status scn_model_single_slope(double alpha, double amplitude, scn_model** out) {
    return guarded([&] {
        require(out);
        *out = new scn_model{scn::make_single_slope(alpha, amplitude)};
    });
}

void scn_model_free(scn_model* model) { delete model; }

scn_status scn_model_zeta(const scn_model* model, scn_path path, double r_km, double* out) {
    return guarded([&] {
        require(model, out);
        *out = model->model.zeta(to_path(path), r_km);
    });
}

scn_status scn_model_los_probability(const scn_model* model, double r_km, double* out) {
    return guarded([&] {
        require(model, out);
        *out = model->model.los_probability(r_km);
    });
}

scn_status scn_model_r1(const scn_model* model, double r_km, double* out) {
    return guarded([&] {
        require(model, out);
        *out = model->model.r1_of(r_km);
    });
}

scn_status scn_model_r2(const scn_model* model, double r_km, double* out) {
    return guarded([&] {
        require(model, out);
        *out = model->model.r2_of(r_km);
    });
}

void scn_network_default(scn_network* out) {
    if (!out) return;
    const scn::NetworkConfig n;
    *out = scn_network{n.lambda_bs, n.rho_ue, n.tx_power_mw, n.noise_power_mw};
}

scn_status scn_distances_create(const scn_model* model, double lambda_bs, scn_distances** out) {
    return guarded([&] {
        require(model, out);
        *out = new scn_distances{scn::DistanceDistributions(model->model, lambda_bs)};
    });
}

void scn_distances_free(scn_distances* dist) { delete dist; }

scn_status scn_distances_pdf(const scn_distances* dist, scn_path path, double r_km, double* out) {
    return guarded([&] {
        require(dist, out);
        *out = dist->dist.pdf(to_path(path), r_km);
    });
}

scn_status scn_distances_cdf(const scn_distances* dist, scn_path path, double r_km, double* out) {
    return guarded([&] {
        require(dist, out);
        *out = dist->dist.cdf(to_path(path), r_km);
    });
}

scn_status scn_distances_total_mass(const scn_distances* dist, scn_path path, double* out) {
    return guarded([&] {
        require(dist, out);
        *out = dist->dist.total_mass(to_path(path));
    });
}

scn_status scn_lambda0(double lambda_bs, double rho_ue, double q, double* out) {
    return guarded([&] {
        require(out);
        *out = scn::lambda0(lambda_bs, rho_ue, q);
    });
}

scn_status scn_activation_estimate(const scn_distances* dist, double rho_ue, double q, scn_activation* out) {
    return guarded([&] {
        require(dist, out);
        const auto e = scn::estimate_activation(dist->dist, rho_ue, q);
        *out = scn_activation{e.lambda_bs, e.rho_ue, e.upper_bound, e.lower_bound, e.approx, e.q_used};
    });
}

scn_status scn_calibrate_q_star(const scn_model* model, double rho_ue, const double* lambda_grid,
                                const double* mc_activated, size_t count, scn_calibration* out) {
    return guarded([&] {
        require(model, out);
        if (count > 0) require(lambda_grid, mc_activated);
        const auto r = scn::calibrate_q_star(model->model, rho_ue, std::span<const double>(lambda_grid, count),
                                             std::span<const double>(mc_activated, count));
        *out = scn_calibration{r.q_star, r.q_upper_limit, r.mse, r.used_grid_scan ? 1 : 0};
    });
}

scn_status scn_laplace_interference(const scn_model* model, const scn_network* net, double lambda_tilde,
                                    scn_path serving_path, double r_km, double s, double* out) {
    return guarded([&] {
        require(model, net, out);
        const scn::CoverageQuery q(model->model, to_network(net), scn::ActiveDensity{lambda_tilde}, 1.0);
        *out = scn::laplace_interference(q, to_path(serving_path), r_km, s);
    });
}

scn_status scn_conditional_coverage(const scn_model* model, const scn_network* net, double lambda_tilde,
                                    double gamma, scn_path serving_path, double r_km, double* out) {
    return guarded([&] {
        require(model, net, out);
        const scn::CoverageQuery q(model->model, to_network(net), scn::ActiveDensity{lambda_tilde}, gamma);
        *out = scn::conditional_coverage(q, to_path(serving_path), r_km);
    });
}

scn_status scn_coverage_probability(const scn_distances* dist, const scn_network* net, double lambda_tilde,
                                    double gamma, double* out) {
    return guarded([&] {
        require(dist, net, out);
        const scn::CoverageQuery q(dist->dist.model(), to_network(net), scn::ActiveDensity{lambda_tilde}, gamma);
        *out = scn::coverage_probability(q, dist->dist);
    });
}

scn_status scn_ase(const scn_distances* dist, const scn_network* net, double lambda_tilde, double gamma0,
                   double* out) {
    return guarded([&] {
        require(dist, net, out);
        const scn::CoverageQuery q(dist->dist.model(), to_network(net), scn::ActiveDensity{lambda_tilde}, gamma0);
        *out = scn::ase(scn::AseQuery{q, gamma0}, dist->dist).value;
    });
}

scn_status scn_sim_create(const scn_model* model, const scn_network* net, double window_side_km, uint64_t trials,
                          uint64_t seed, const double* gammas, size_t gamma_count, scn_sim** out) {
    return guarded([&] {
        require(model, net, out);
        if (gamma_count > 0) require(gammas);
        scn::mc::SimConfig cfg{model->model, to_network(net), window_side_km, static_cast<std::size_t>(trials), seed,
                               std::vector<double>(gammas, gammas + gamma_count)};
        cfg.finalize();
        *out = new scn_sim{std::move(cfg), {}};
    });
}

void scn_sim_free(scn_sim* sim) { delete sim; }

scn_status scn_sim_window_side(const scn_sim* sim, double* out) {
    return guarded([&] {
        require(sim, out);
        *out = sim->cfg.window_side_km;
    });
}

scn_status scn_sim_trial(const scn_sim* sim, uint64_t trial_seed, scn_trial* out) {
    return guarded([&] {
        require(sim, out);
        *out = to_trial(scn::mc::run_trial(sim->cfg, trial_seed));
    });
}

scn_status scn_sim_run(scn_sim* sim, unsigned workers) {
    return guarded([&] {
        require(sim);
        sim->outcomes = scn::mc::run_trials(sim->cfg, workers);
    });
}

scn_status scn_sim_outcome(const scn_sim* sim, size_t index, scn_trial* out) {
    return guarded([&] {
        require(sim, out);
        require_outcomes(sim);
        if (index >= sim->outcomes.size()) scn::raise(scn::ErrorCode::InvalidArgument, "trial index out of range");
        *out = to_trial(sim->outcomes[index]);
    });
}

scn_status scn_sim_coverage(const scn_sim* sim, size_t gamma_index, scn_estimate* out) {
    return guarded([&] {
        require(sim, out);
        require_outcomes(sim);
        if (gamma_index >= sim->cfg.gamma_list.size()) {
            scn::raise(scn::ErrorCode::InvalidArgument, "gamma index out of range");
        }
        const auto e = scn::mc::coverage_from(sim->outcomes, {sim->cfg.gamma_list[gamma_index]}).front();
        *out = scn_estimate{e.value, e.std_error};
    });
}

scn_status scn_sim_activated_density(const scn_sim* sim, scn_estimate* out) {
    return guarded([&] {
        require(sim, out);
        require_outcomes(sim);
        const auto e = scn::mc::activated_density_from(sim->outcomes, sim->cfg.network.lambda_bs);
        *out = scn_estimate{e.value, e.std_error};
    });
}

scn_status scn_sim_rate_density(const scn_sim* sim, double gamma0, scn_estimate* out) {
    return guarded([&] {
        require(sim, out);
        require_outcomes(sim);
        const auto e = scn::mc::rate_density_from(sim->outcomes, sim->cfg.network.lambda_bs, gamma0);
        *out = scn_estimate{e.value, e.std_error};
    });
}

scn_status scn_sim_write_trials_csv(const scn_sim* sim, const char* path) {
    return guarded([&] {
        require(sim, path);
        require_outcomes(sim);
        scn::mc::write_trials_csv(path, sim->cfg, sim->outcomes);
    });
}

scn_status scn_config_default(scn_config** out) {
    return guarded([&] {
        require(out);
        *out = new scn_config{};
    });
}

scn_status scn_config_load(const char* path, scn_config** out) {
    return guarded([&] {
        require(path, out);
        *out = new scn_config{scn::load_config(path)};
    });
}

void scn_config_free(scn_config* cfg) { delete cfg; }

scn_status scn_config_set(scn_config* cfg, const char* assignment) {
    return guarded([&] {
        require(cfg, assignment);
        cfg->cfg.set(assignment);
    });
}

scn_status scn_config_q_star(const scn_config* cfg, double* out) {
    return guarded([&] {
        require(cfg, out);
        *out = cfg->cfg.q_star;
    });
}

scn_status scn_config_update_file(const char* path, const char* key, const char* value) {
    return guarded([&] {
        require(path, key, value);
        scn::update_config_file(path, key, value);
    });
}

scn_status scn_sweep_coverage(const scn_config* cfg, const char* scenarios, scn_sweep** out) {
    return guarded([&] {
        require(cfg, scenarios, out);
        const auto list = scn::parse_scenarios(scenarios);
        *out = new scn_sweep{scn::coverage_sweep(cfg->cfg, list)};
    });
}

scn_status scn_sweep_density(const scn_config* cfg, const char* scenario, scn_sweep** out) {
    return guarded([&] {
        require(cfg, scenario, out);
        *out = new scn_sweep{scn::density_sweep(cfg->cfg, scn::parse_scenario(scenario))};
    });
}

scn_status scn_sweep_ase(const scn_config* cfg, const char* scenarios, scn_sweep** out) {
    return guarded([&] {
        require(cfg, scenarios, out);
        const auto list = scn::parse_scenarios(scenarios);
        *out = new scn_sweep{scn::ase_sweep(cfg->cfg, list)};
    });
}

scn_status scn_sweep_read_csv(const char* path, scn_sweep** out) {
    return guarded([&] {
        require(path, out);
        *out = new scn_sweep{scn::read_sweep_csv(path)};
    });
}

scn_status scn_sweep_write_csv(const scn_sweep* sweep, const char* path) {
    return guarded([&] {
        require(sweep, path);
        scn::write_sweep_csv(path, sweep->result);
    });
}

void scn_sweep_free(scn_sweep* sweep) { delete sweep; }

size_t scn_sweep_row_count(const scn_sweep* sweep) { return sweep ? sweep->result.rows.size() : 0; }

scn_status scn_sweep_value(const scn_sweep* sweep, size_t row, const char* column, double* out, int* present) {
    return guarded([&] {
        require(sweep, column, out, present);
        if (row >= sweep->result.rows.size()) scn::raise(scn::ErrorCode::InvalidArgument, "row index out of range");
        const auto& r = sweep->result.rows[row];
        const std::string_view name(column);
        if (name == "lambda_bs") {
            *out = r.lambda_bs;
            *present = 1;
            return;
        }
        const std::optional<double> scn::SweepRow::*fields[] = {
            &scn::SweepRow::gamma_db,        &scn::SweepRow::p_cov_analytical,
            &scn::SweepRow::p_cov_mc,        &scn::SweepRow::p_cov_mc_stderr,
            &scn::SweepRow::lambda_tilde_lb, &scn::SweepRow::lambda_tilde_ub,
            &scn::SweepRow::lambda_tilde_approx, &scn::SweepRow::lambda_tilde_mc,
            &scn::SweepRow::lambda_tilde_mc_stderr, &scn::SweepRow::err_lb,
            &scn::SweepRow::err_ub,          &scn::SweepRow::err_approx,
            &scn::SweepRow::ase_analytical,  &scn::SweepRow::ase_mc,
            &scn::SweepRow::ase_mc_stderr,
        };
        const auto columns = scn::sweep_columns();
        for (std::size_t c = 2; c < columns.size(); ++c) {
            if (columns[c] == name) {
                const auto& v = r.*fields[c - 2];
                *present = v ? 1 : 0;
                *out = v.value_or(std::numeric_limits<double>::quiet_NaN());
                return;
            }
        }
        scn::raise(scn::ErrorCode::InvalidArgument, "unknown column '" + std::string(name) + "'");
    });
}

const char* scn_sweep_scenario(const scn_sweep* sweep, size_t row) {
    if (!sweep || row >= sweep->result.rows.size()) return nullptr;
    return sweep->result.rows[row].scenario.c_str();
}

const char* scn_sweep_summary(const scn_sweep* sweep) { return sweep ? sweep->result.summary.c_str() : ""; }

scn_status scn_calibrate(const scn_config* cfg, const char* scenario, const char* report_path, scn_calibration* out) {
    return guarded([&] {
        require(cfg, out);
        const auto report =
            scn::calibrate(cfg->cfg, scenario ? scn::parse_scenario(scenario) : scn::Scenario::Case1Imc);
        if (report_path) {
            std::ofstream file(report_path, std::ios::binary | std::ios::trunc);
            if (!file) scn::raise(scn::ErrorCode::IoError, std::string("cannot open ") + report_path);
            file << report.to_text();
            if (!file) scn::raise(scn::ErrorCode::IoError, std::string("failed writing ") + report_path);
        }
        *out = scn_calibration{report.fit.q_star, report.fit.q_upper_limit, report.fit.mse,
                               report.fit.used_grid_scan ? 1 : 0};
    });
}

}  // extern "C"
