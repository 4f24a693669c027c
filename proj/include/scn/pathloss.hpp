#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scn {

enum class Path { LoS, NLoS };

const char* to_string(Path path) noexcept;

// dB helpers. Everything past the configuration boundary is linear, km and mW.
double dbm_to_mw(double dbm);
double db_to_linear(double db);
double linear_to_db(double linear);

/// LoS probability of one segment. Linear forms `intercept + slope * r` keep
/// their coefficients so the radial mass integral stays closed-form; other
/// shapes go through quadrature.
class LosProbability {
public:
    static LosProbability linear(double intercept, double slope);
    static LosProbability constant(double value) { return linear(value, 0.0); }
    static LosProbability custom(std::function<double(double)> fn);

    double operator()(double r_km) const;
    bool is_linear() const noexcept { return linear_.has_value(); }
    double intercept() const { return linear_->first; }
    double slope() const { return linear_->second; }

private:
    std::function<double(double)> fn_;
    std::optional<std::pair<double, double>> linear_;
};

/// One piece of the path-loss model: valid on (previous end, end_km].
/// Gains are A * r^-alpha with r in km.
struct PathLossSegment {
    double end_km;
    double los_amplitude;
    double los_exponent;
    double nlos_amplitude;
    double nlos_exponent;
    LosProbability los_probability;
};

/// N-piece LoS/NLoS path-loss model. Immutable; copies share storage.
///
/// Construction validates that both stacked gain functions are strictly
/// decreasing, that the LoS probability is a non-increasing probability,
/// and that LoS is never weaker than NLoS from `kDominanceFloorKm` outwards.
class PathLossModel {
public:
    // Below ~3 m the 3GPP LoS/NLoS fits cross over, so LoS dominance is only
    // checked from 10 m outwards.
    static constexpr double kDominanceFloorKm = 0.01;

    PathLossModel(std::string name, std::vector<PathLossSegment> segments);

    const std::string& name() const noexcept { return data_->name; }
    std::span<const PathLossSegment> segments() const noexcept { return data_->segments; }
    std::size_t segment_count() const noexcept { return data_->segments.size(); }
    /// Finite break distances d_1 .. d_{N-1}.
    std::vector<double> break_points() const;
    std::size_t segment_index(double r_km) const;

    double zeta(Path path, double r_km) const;
    double los_probability(double r_km) const;

    /// Distance at which the NLoS gain equals the LoS gain at r.
    double r1_of(double r_km) const;
    /// Distance at which the LoS gain equals the NLoS gain at r.
    double r2_of(double r_km) const;

    /// Closed-form or cached value of  integral_0^r Pr^L(u) u du.
    double los_radial_mass(double r_km) const;

    /// Largest gain any BS at distance r can offer (LoS where LoS is possible).
    double gain_envelope(double r_km) const;

    /// Same storage, or same name and parameters (custom LoS probability
    /// functions can only match by storage).
    bool same_as(const PathLossModel& other) const noexcept;

private:
    struct Data {
        std::string name;
        std::vector<PathLossSegment> segments;
        std::vector<double> mass_at_start;  // los_radial_mass at each segment start
    };

    double segment_gain(Path path, std::size_t n, double r_km) const;
    double invert_stacked(Path path, double target_gain) const;
    double segment_radial_mass(std::size_t n, double from, double to) const;
    void validate() const;

    std::shared_ptr<const Data> data_;
};

struct Case1Parameters {
    double d1_km = 0.3;
    double los_exponent = 2.09;
    double nlos_exponent = 3.75;
    double los_amplitude = 4.168693834703355e-11;   // 10^-10.38
    double nlos_amplitude = 2.884031503126606e-15;  // 10^-14.54
};

/// Two-piece 3GPP model: shared LoS/NLoS power laws, Pr^L = 1 - r/d1 up to d1, 0 after.
PathLossModel make_3gpp_case1(const Case1Parameters& params = {});

/// One power law, never LoS. Requires alpha > 2.
PathLossModel make_single_slope(double alpha, double amplitude);

struct NetworkConfig {
    double lambda_bs = 100.0;                 // BSs/km^2
    double rho_ue = 300.0;                    // UEs/km^2, +inf for a fully loaded network
    double tx_power_mw = 251.18864315095797;  // 24 dBm
    double noise_power_mw = 3.1622776601683795e-10;  // -95 dBm

    void validate() const;
};

}  // namespace scn
