#pragma once

#include <vector>

#include "scn/numerics.hpp"
#include "scn/pathloss.hpp"

namespace scn {

/// Serving-distance distributions of the typical UE under smallest-path-loss
/// association: densities f_R^L, f_R^NL (all deployed BSs count, so the full
/// density lambda is used) and their CDFs.
///
/// The CDFs are tabulated once at construction on a log-spaced grid (plus
/// every break point) and read back through monotone cubic Hermite
/// interpolation that uses the exact density as the node slope.
class DistanceDistributions {
public:
    static constexpr std::size_t kGridNodes = 512;
    static constexpr double kGridStartKm = 1e-4;
    static constexpr double kResidualMass = 1e-9;

    DistanceDistributions(PathLossModel model, double lambda_bs, numerics::QuadratureSpec spec = {});

    const PathLossModel& model() const noexcept { return model_; }
    double lambda_bs() const noexcept { return lambda_; }

    double pdf(Path path, double r_km) const;
    double cdf(Path path, double r_km) const;
    /// CDF by direct quadrature, bypassing the table.
    double cdf_direct(Path path, double r_km) const;
    /// F^Path(+inf).
    double total_mass(Path path) const;
    /// Radius beyond which less than kResidualMass probability remains.
    double tail_radius_km() const noexcept { return tail_radius_; }
    /// Quadrature split points on [0, tail]: 0, interior break points, tail.
    std::vector<double> split_points(double upper_km) const;

private:
    struct Table {
        std::vector<double> value;
        std::vector<double> slope;
    };

    double pdf_unchecked(Path path, double r_km) const;
    double interpolate(const Table& table, double r_km) const;

    PathLossModel model_;
    double lambda_;
    numerics::QuadratureSpec spec_;
    double tail_radius_ = 0.0;
    double mass_los_ = 0.0;
    double mass_nlos_ = 0.0;
    std::vector<double> nodes_;
    Table los_;
    Table nlos_;
};

}  // namespace scn
