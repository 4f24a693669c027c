#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "scn/pathloss.hpp"

namespace scn::mc {

/// Monte Carlo set-up for the typical-UE experiment on a square torus
/// centred at the origin.
struct SimConfig {
    PathLossModel model;
    NetworkConfig network;
    double window_side_km = 0.0;  // 0 selects default_window_side()
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::vector<double> gamma_list;  // linear thresholds

    /// Smallest side for which the envelope gain at half the side is below
    /// 1e-6 of the gain at the mean nearest-BS distance.
    static double min_window_side(const PathLossModel& model, double lambda_bs);
    /// max(4/sqrt(lambda), 3 km, min_window_side()).
    static double default_window_side(const PathLossModel& model, double lambda_bs);

    /// Resolves a zero window side to the default, then checks every invariant.
    void finalize();
    void validate() const;
};

struct TrialOutcome {
    double sinr_linear = 0.0;
    Path serving_path = Path::NLoS;
    double serving_distance_km = 0.0;
    std::size_t activated_bs_count = 0;  // BSs serving >= 1 background UE
    std::size_t total_bs_count = 0;
    double interference_mw = 0.0;
    std::size_t degenerate_redraws = 0;  // empty-window redraws before this outcome
};

struct Point {
    double x;
    double y;
};

/// One realisation of the network, before fading.
struct Snapshot {
    std::vector<Point> bs;
    std::vector<Point> ue;               // background UEs
    std::vector<std::uint32_t> ue_serving;  // BS index per background UE
    std::vector<std::uint8_t> active;      // 1 if some background UE is attached
    std::uint32_t typical_serving = 0;
    Path typical_path = Path::NLoS;
    double typical_distance_km = 0.0;
    double typical_gain = 0.0;
    std::uint64_t link_seed = 0;
    std::size_t degenerate_redraws = 0;
};

/// Per-trial seed derived from the master seed and the trial index.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index);

/// Torus displacement/distance inside a window of the given side.
double torus_distance(Point a, Point b, double side_km);

/// LoS state of a UE-BS link. Frozen for the trial: a pure function of the
/// trial's link seed, the UE id, the BS id and the distance.
bool link_is_los(const PathLossModel& model, std::uint64_t link_seed, std::uint32_t ue_id, std::uint32_t bs_id,
                 double distance_km);

inline constexpr std::uint32_t kTypicalUeId = 0xFFFFFFFFu;

Snapshot draw_snapshot(const SimConfig& cfg, std::uint64_t seed);
TrialOutcome run_trial(const SimConfig& cfg, std::uint64_t seed);

/// Runs cfg.trials trials on `workers` threads (0 = hardware concurrency).
/// Results are indexed by trial, so the output does not depend on `workers`.
std::vector<TrialOutcome> run_trials(const SimConfig& cfg, unsigned workers = 0);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

std::vector<Estimate> coverage_from(const std::vector<TrialOutcome>& outcomes, const std::vector<double>& gammas);
Estimate activated_density_from(const std::vector<TrialOutcome>& outcomes, double lambda_bs);
Estimate rate_density_from(const std::vector<TrialOutcome>& outcomes, double lambda_bs, double gamma0);

std::vector<Estimate> estimate_coverage(const SimConfig& cfg);
Estimate estimate_activated_density(const SimConfig& cfg);
Estimate estimate_rate_density(const SimConfig& cfg, double gamma0);

/// CSV: trial,seed,sinr_db,path,distance_km,active_bs,total_bs
void write_trials_csv(const std::filesystem::path& path, const SimConfig& cfg,
                      const std::vector<TrialOutcome>& outcomes);

}  // namespace scn::mc
