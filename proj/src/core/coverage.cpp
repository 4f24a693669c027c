#include "scn/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "scn/error.hpp"
#include "scn/numerics.hpp"

namespace scn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRangeSlack = 1e-6;

numerics::QuadratureSpec inner_spec() {
    numerics::QuadratureSpec spec;
    spec.rel_tol = 1e-7;
    spec.abs_tol = 1e-13;
    return spec;
}

numerics::QuadratureSpec outer_spec() {
    numerics::QuadratureSpec spec;
    spec.rel_tol = 1e-7;
    spec.abs_tol = 1e-10;
    return spec;
}

// integral_{from}^{inf} weight(u) * u * x/(1+x) du with x = s P zeta(u).
double interference_term(const PathLossModel& model, Path path, double from, double s_times_p) {
    const auto integrand = [&](double u) {
        const double los = model.los_probability(u);
        const double weight = path == Path::LoS ? los : 1.0 - los;
        if (weight <= 0.0) return 0.0;
        const double x = s_times_p * model.zeta(path, u);
        return weight * u * (x / (1.0 + x));
    };
    std::vector<double> points{from};
    for (double d : model.break_points()) {
        if (d > from) points.push_back(d);
    }
    points.push_back(numerics::kInfinity);
    return numerics::integrate_split(integrand, points, inner_spec());
}

}  // namespace

CoverageQuery::CoverageQuery(PathLossModel model, NetworkConfig config, ActiveDensity lambda_tilde, double gamma)
    : model_(std::move(model)), config_(config), lambda_tilde_(lambda_tilde), gamma_(gamma) {
    config_.validate();
    if (!(lambda_tilde_.per_km2 >= 0.0) || lambda_tilde_.per_km2 > config_.lambda_bs * (1.0 + 1e-12)) {
        raise(ErrorCode::InvalidArgument, "active density must lie in [0, lambda_bs]");
    }
    if (!(gamma_ > 0.0)) raise(ErrorCode::InvalidArgument, "SINR threshold must be positive");
}

double laplace_interference(const CoverageQuery& q, Path serving_path, double r_km, double s) {
    if (!(r_km > 0.0)) raise(ErrorCode::NonPositiveDistance, "laplace_interference needs r > 0");
    if (!(s > 0.0)) raise(ErrorCode::NonPositiveLaplaceArg, "laplace_interference needs s > 0");
    if (q.lambda_tilde() == 0.0) return 1.0;
    const PathLossModel& model = q.model();
    const double los_exclusion = serving_path == Path::LoS ? r_km : model.r2_of(r_km);
    const double nlos_exclusion = serving_path == Path::LoS ? model.r1_of(r_km) : r_km;
    const double sp = s * q.config().tx_power_mw;
    const double exponent = interference_term(model, Path::LoS, los_exclusion, sp) +
                            interference_term(model, Path::NLoS, nlos_exclusion, sp);
    return std::exp(-kTwoPi * q.lambda_tilde() * exponent);
}

double conditional_coverage(const CoverageQuery& q, Path serving_path, double r_km) {
    if (!(r_km > 0.0)) raise(ErrorCode::NonPositiveDistance, "conditional_coverage needs r > 0");
    const double received = q.config().tx_power_mw * q.model().zeta(serving_path, r_km);
    const double noise_factor = std::exp(-q.gamma() * q.config().noise_power_mw / received);
    if (noise_factor == 0.0) return 0.0;
    return noise_factor * laplace_interference(q, serving_path, r_km, q.gamma() / received);
}

double coverage_probability(const CoverageQuery& q, const DistanceDistributions& dist) {
    if (dist.lambda_bs() != q.config().lambda_bs || !dist.model().same_as(q.model())) {
        raise(ErrorCode::InvalidArgument, "distance distributions were built for a different model or density");
    }
    const auto integrand = [&](double r) {
        double total = 0.0;
        for (Path path : {Path::LoS, Path::NLoS}) {
            const double density = dist.pdf(path, r);
            if (density > 0.0) total += density * conditional_coverage(q, path, r);
        }
        return total;
    };
    const double value = numerics::integrate_split(integrand, dist.split_points(dist.tail_radius_km()), outer_spec());
    if (value < -kRangeSlack || value > 1.0 + kRangeSlack) {
        std::ostringstream os;
        os << "coverage probability " << value << " outside [0,1]";
        raise(ErrorCode::NumericalInconsistency, os.str());
    }
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace scn
