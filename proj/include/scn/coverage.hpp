#pragma once

#include "scn/association.hpp"
#include "scn/pathloss.hpp"

namespace scn {

/// Density of BSs that are switched on and therefore interfere. Kept apart
/// from NetworkConfig::lambda_bs (which drives association) on purpose.
struct ActiveDensity {
    double per_km2 = 0.0;
};

class CoverageQuery {
public:
    /// gamma is the linear SINR threshold.
    CoverageQuery(PathLossModel model, NetworkConfig config, ActiveDensity lambda_tilde, double gamma);

    const PathLossModel& model() const noexcept { return model_; }
    const NetworkConfig& config() const noexcept { return config_; }
    double lambda_tilde() const noexcept { return lambda_tilde_.per_km2; }
    double gamma() const noexcept { return gamma_; }

    CoverageQuery with_gamma(double gamma) const { return CoverageQuery(model_, config_, lambda_tilde_, gamma); }
    static CoverageQuery from_db(PathLossModel model, NetworkConfig config, ActiveDensity lambda_tilde,
                                 double gamma_db) {
        return CoverageQuery(std::move(model), config, lambda_tilde, db_to_linear(gamma_db));
    }

private:
    PathLossModel model_;
    NetworkConfig config_;
    ActiveDensity lambda_tilde_;
    double gamma_;
};

/// Laplace transform of the aggregate interference seen by a UE served over
/// `serving_path` at distance r, evaluated at s (1/mW). Interferers are the
/// active BSs outside the exclusion radii implied by the serving link.
double laplace_interference(const CoverageQuery& q, Path serving_path, double r_km, double s);

/// Pr[SINR > gamma | serving over `serving_path` at distance r].
double conditional_coverage(const CoverageQuery& q, Path serving_path, double r_km);

/// Coverage probability, integrating the conditional coverage against the
/// serving-distance densities. `dist` must be built from the same model and
/// the query's full BS density.
double coverage_probability(const CoverageQuery& q, const DistanceDistributions& dist);

}  // namespace scn
