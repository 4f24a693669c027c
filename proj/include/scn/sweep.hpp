#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scn/activation.hpp"
#include "scn/config.hpp"
#include "scn/montecarlo.hpp"

namespace scn {

enum class Scenario { Case1Imc, Case1FullLoad, SingleSlopeImc, SingleSlopeFullLoad };

const char* to_string(Scenario s) noexcept;
Scenario parse_scenario(std::string_view tag);
/// Comma-separated list of scenario tags.
std::vector<Scenario> parse_scenarios(std::string_view tags);

bool is_full_load(Scenario s) noexcept;
/// Case 1 scenarios use every path-loss key; single-slope ones take the NLoS
/// exponent and amplitude.
PathLossModel scenario_model(Scenario s, const ExperimentConfig& cfg);
NetworkConfig scenario_network(Scenario s, const ExperimentConfig& cfg, double lambda_bs);
/// q used for lambda0: the calibrated q_star for Case 1, 3.5 for single slope
/// (nearest-BS association, where the Voronoi-load value applies directly).
double scenario_q(Scenario s, const ExperimentConfig& cfg);
/// Interfering density used by the analytical coverage: lambda0(q) with idle
/// mode, lambda under full load.
double scenario_active_density(Scenario s, const ExperimentConfig& cfg, double lambda_bs);

/// Simulator set-up for one grid point. The seed is derived from the master
/// seed, the scenario and the point index so each point is reproducible alone.
mc::SimConfig scenario_sim(Scenario s, const ExperimentConfig& cfg, double lambda_bs, std::size_t point_index,
                           std::vector<double> gammas_linear);

struct SweepRow {
    double lambda_bs = 0.0;
    std::string scenario;
    std::optional<double> gamma_db;
    std::optional<double> p_cov_analytical;
    std::optional<double> p_cov_mc;
    std::optional<double> p_cov_mc_stderr;
    std::optional<double> lambda_tilde_lb;
    std::optional<double> lambda_tilde_ub;
    std::optional<double> lambda_tilde_approx;
    std::optional<double> lambda_tilde_mc;
    std::optional<double> lambda_tilde_mc_stderr;
    std::optional<double> err_lb;
    std::optional<double> err_ub;
    std::optional<double> err_approx;
    std::optional<double> ase_analytical;
    std::optional<double> ase_mc;
    std::optional<double> ase_mc_stderr;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::string summary;  // human-readable checks, one per line

    /// Rows sorted by lambda_bs, probabilities in [0,1], densities >= 0.
    /// Throws NumericalInconsistency otherwise.
    void validate() const;
};

/// Column order of the sweep CSV.
std::span<const std::string_view> sweep_columns();

std::string sweep_csv_text(const SweepResult& result);
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);
SweepResult parse_sweep_csv(std::string_view text);
SweepResult read_sweep_csv(const std::filesystem::path& path);

/// One row per (lambda, gamma, scenario). MC columns are filled when
/// cfg.trials > 0.
SweepResult coverage_sweep(const ExperimentConfig& cfg, std::span<const Scenario> scenarios);
/// Bounds, lambda0(q) and the Monte Carlo activated density per lambda, with
/// signed errors (estimate - MC). Needs cfg.trials >= 100.
SweepResult density_sweep(const ExperimentConfig& cfg, Scenario scenario);
/// Analytical ASE per lambda and scenario; MC rate density when cfg.trials > 0.
SweepResult ase_sweep(const ExperimentConfig& cfg, std::span<const Scenario> scenarios);

struct CalibrationReport {
    CalibrationResult fit;
    std::vector<double> lambda_grid;
    std::vector<double> lambda_tilde_mc;
    std::vector<double> lambda_tilde_mc_stderr;
    std::vector<double> lambda_tilde_upper;
    std::vector<double> lambda_tilde_lower;
    std::vector<double> lambda0_q_star;
    std::size_t trials = 0;
    std::uint64_t seed = 0;

    std::string to_text() const;  // key = value lines
};

/// Monte Carlo activated densities over the grid (default: 9 points over
/// [10, 1000]) followed by the q* fit. Needs cfg.trials >= 100.
CalibrationReport calibrate(const ExperimentConfig& cfg, Scenario scenario = Scenario::Case1Imc);

}  // namespace scn
