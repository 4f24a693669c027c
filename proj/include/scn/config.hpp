#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scn/pathloss.hpp"

namespace scn {

/// Experiment configuration read from flat `key = value` text.
///
/// Keys: d1_km, alpha_los, alpha_nlos, a_los_db, a_nlos_db, tx_power_dbm,
/// noise_dbm, lambda_bs, rho_ue (number or "inf"), q_star, lambda_grid,
/// gamma_db, gamma0_db, trials, seed, window_side_km. Every key is optional;
/// missing keys keep the 3GPP Case 1 defaults. dB values are converted at load.
struct ExperimentConfig {
    Case1Parameters pathloss;
    NetworkConfig network;
    double q_star = 4.18;
    // nullopt: key absent, use the default grid. Present but empty is an error
    // at sweep time.
    std::optional<std::vector<double>> lambda_grid;
    std::vector<double> gamma_db{0.0};
    double gamma0_db = 0.0;
    std::size_t trials = 2000;
    std::uint64_t seed = 1;
    double window_side_km = 0.0;  // 0 = simulator default

    /// Applies one `key=value` assignment. Throws ConfigError naming the key
    /// if it is unknown or the value does not parse.
    void set(std::string_view key, std::string_view value);
    void set(std::string_view assignment);

    /// lambda_grid, or the default 10^0.5 .. 10^4 in quarter decades.
    /// Throws ConfigError naming `lambda_grid` if it was given but is empty.
    std::vector<double> resolved_lambda_grid() const;

    /// Serialises every key; parse(to_text()) reproduces the config.
    std::string to_text() const;
};

ExperimentConfig parse_config(std::string_view text, std::string_view source = "<string>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Rewrites (or appends) one key in a config file, leaving every other line
/// and comment untouched.
void update_config_file(const std::filesystem::path& path, std::string_view key, std::string_view value);

/// Grid syntax: comma-separated numbers, or `logspace:<lo_exp>:<hi_exp>:<count>`.
std::vector<double> parse_grid(std::string_view text);

std::string format_double(double v);

}  // namespace scn
