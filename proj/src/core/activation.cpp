#include "scn/activation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "scn/error.hpp"

namespace scn {

namespace {

constexpr double kQSearchCap = 50.0;

double mean_squared_error(std::span<const double> grid, std::span<const double> mc, double rho, double q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double e = lambda0(grid[i], rho, q) - mc[i];
        sum += e * e;
    }
    return sum / static_cast<double>(grid.size());
}

}  // namespace

double lambda0(double lambda_bs, double rho_ue, double q) {
    if (!(lambda_bs > 0.0) || !(rho_ue >= 0.0) || !(q > 0.0)) {
        raise(ErrorCode::InvalidArgument, "lambda0 needs lambda > 0, rho >= 0, q > 0");
    }
    if (std::isinf(rho_ue)) return lambda_bs;
    // 1 - (1+x)^-q written with expm1/log1p so tiny loads keep their digits.
    const double x = rho_ue / (q * lambda_bs);
    return lambda_bs * -std::expm1(-q * std::log1p(x));
}

double prob_not_associated_given_r(const DistanceDistributions& dist, double r_km) {
    if (!(r_km > 0.0)) raise(ErrorCode::NonPositiveDistance, "prob_not_associated_given_r needs r > 0");
    const PathLossModel& model = dist.model();
    const double los = model.los_probability(r_km);
    double value = 0.0;
    if (los > 0.0) {
        value += (dist.cdf(Path::LoS, r_km) + dist.cdf(Path::NLoS, model.r1_of(r_km))) * los;
    }
    if (los < 1.0) {
        value += (dist.cdf(Path::LoS, model.r2_of(r_km)) + dist.cdf(Path::NLoS, r_km)) * (1.0 - los);
    }
    return std::clamp(value, 0.0, 1.0);
}

double prob_bs_idle(const DistanceDistributions& dist, double rho_ue) {
    if (!(rho_ue >= 0.0)) raise(ErrorCode::InvalidArgument, "rho_ue must be >= 0");
    if (rho_ue == 0.0) return 1.0;
    if (std::isinf(rho_ue)) return 0.0;

    // Past `limit` every CDF argument (r, r1, r2) is beyond the tabulated tail,
    // so 1 - Pr[w !~ b | r] is at the normalisation noise floor.
    const PathLossModel& model = dist.model();
    const double tail = dist.tail_radius_km();
    double limit = tail;
    while (std::min({limit, model.r1_of(limit), model.r2_of(limit)}) < tail) limit *= 2.0;

    const auto attached = [&dist](double r) {
        const double keep = 1.0 - prob_not_associated_given_r(dist, r);
        return keep < 1e-12 ? 0.0 : keep * r;
    };
    numerics::QuadratureSpec spec;
    spec.rel_tol = 1e-9;
    spec.abs_tol = 1e-15;
    const double area = numerics::integrate_split(attached, dist.split_points(limit), spec);
    return std::exp(-2.0 * std::numbers::pi * rho_ue * area);
}

double lambda_tilde_upper(const DistanceDistributions& dist, double rho_ue) {
    return dist.lambda_bs() * (1.0 - prob_bs_idle(dist, rho_ue));
}

double lambda_tilde_lower(double lambda_bs, double rho_ue) { return lambda0(lambda_bs, rho_ue, kVoronoiShape); }

ActivationEstimate estimate_activation(const DistanceDistributions& dist, double rho_ue, double q) {
    if (!(q >= kVoronoiShape)) raise(ErrorCode::InvalidArgument, "q must be >= 3.5 to sit between the bounds");
    ActivationEstimate est{};
    est.lambda_bs = dist.lambda_bs();
    est.rho_ue = rho_ue;
    est.upper_bound = lambda_tilde_upper(dist, rho_ue);
    est.lower_bound = lambda_tilde_lower(est.lambda_bs, rho_ue);
    est.approx = lambda0(est.lambda_bs, rho_ue, q);
    est.q_used = q;
    const double slack = 1e-9 * est.lambda_bs;
    if (est.lower_bound < -slack || est.lower_bound > est.approx + slack || est.approx > est.upper_bound + slack ||
        est.upper_bound > est.lambda_bs + slack || est.approx > rho_ue + slack) {
        std::ostringstream os;
        os << "activation ordering violated at lambda=" << est.lambda_bs << ": lb=" << est.lower_bound
           << " approx=" << est.approx << " ub=" << est.upper_bound;
        raise(ErrorCode::NumericalInconsistency, os.str());
    }
    return est;
}

CalibrationResult calibrate_q_star(const PathLossModel& model, double rho_ue, std::span<const double> lambda_grid,
                                   std::span<const double> mc_activated) {
    if (lambda_grid.empty()) raise(ErrorCode::EmptyGrid, "calibration needs at least one grid density");
    if (lambda_grid.size() != mc_activated.size()) {
        raise(ErrorCode::InvalidArgument, "one Monte Carlo estimate is needed per grid density");
    }
    const double lambda_max = *std::max_element(lambda_grid.begin(), lambda_grid.end());
    const DistanceDistributions dist(model, lambda_max);
    const double upper = lambda_tilde_upper(dist, rho_ue);

    CalibrationResult result{};
    const auto gap = [&](double q) { return lambda0(lambda_max, rho_ue, q) - upper; };
    if (gap(kQSearchCap) < 0.0) {
        result.q_upper_limit = kQSearchCap;
    } else if (gap(kVoronoiShape) >= 0.0) {
        result.q_upper_limit = kVoronoiShape;
    } else {
        result.q_upper_limit = numerics::find_root(gap, kVoronoiShape, kQSearchCap, 1e-10);
    }

    const auto mse = [&](double q) { return mean_squared_error(lambda_grid, mc_activated, rho_ue, q); };
    const double lo = kVoronoiShape;
    const double hi = result.q_upper_limit;
    if (!(hi > lo)) {
        result.q_star = lo;
        result.mse = mse(lo);
        return result;
    }
    constexpr double kTol = 1e-6;
    double q = numerics::minimize_scalar(mse, lo, hi, kTol);

    // Unimodality is assumed, not known: cross-check against a coarse scan
    // and re-run golden-section around the scan minimum if they disagree.
    constexpr int kScanPoints = 400;
    const double step = (hi - lo) / kScanPoints;
    double best_q = lo;
    double best = mse(lo);
    for (int i = 1; i <= kScanPoints; ++i) {
        const double qi = lo + step * i;
        const double v = mse(qi);
        if (v < best) {
            best = v;
            best_q = qi;
        }
    }
    if (best < mse(q) && std::abs(best_q - q) > 2.0 * step) {
        q = numerics::minimize_scalar(mse, std::max(lo, best_q - step), std::min(hi, best_q + step), kTol);
        result.used_grid_scan = true;
    }
    result.q_star = q;
    result.mse = mse(q);
    return result;
}

}  // namespace scn
