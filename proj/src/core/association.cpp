#include "scn/association.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scn/error.hpp"

namespace scn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Tiny step used to read the right-hand limit of a density at a break point.
double just_above(double r) { return r * (1.0 + 1e-12); }

}  // namespace

DistanceDistributions::DistanceDistributions(PathLossModel model, double lambda_bs, numerics::QuadratureSpec spec)
    : model_(std::move(model)), lambda_(lambda_bs), spec_(spec) {
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) {
        raise(ErrorCode::InvalidArgument, "DistanceDistributions needs a positive finite BS density");
    }
    spec_.validate();

    const auto total_pdf = [this](double r) { return pdf_unchecked(Path::LoS, r) + pdf_unchecked(Path::NLoS, r); };
    const auto integrate_from = [&](const numerics::ScalarFn& f, double from) {
        std::vector<double> points{from};
        for (double d : model_.break_points()) {
            if (d > from) points.push_back(d);
        }
        points.push_back(numerics::kInfinity);
        return numerics::integrate_split(f, points, spec_);
    };

    const auto los = [this](double r) { return pdf_unchecked(Path::LoS, r); };
    const auto nlos = [this](double r) { return pdf_unchecked(Path::NLoS, r); };
    mass_los_ = integrate_from(los, 0.0);
    mass_nlos_ = integrate_from(nlos, 0.0);

    tail_radius_ = 1.0 / std::sqrt(lambda_);
    while (integrate_from(total_pdf, tail_radius_) >= kResidualMass) tail_radius_ *= 1.25;
    tail_radius_ = std::max(tail_radius_, 10.0 * kGridStartKm);

    nodes_ = numerics::logspace(kGridStartKm, tail_radius_, kGridNodes);
    for (double d : model_.break_points()) {
        if (d > kGridStartKm && d < tail_radius_) nodes_.push_back(d);
    }
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

    const auto tabulate = [&](Path path, Table& table) {
        const auto f = [this, path](double r) { return pdf_unchecked(path, r); };
        const std::size_t n = nodes_.size();
        table.value.assign(n, 0.0);
        // Per-interval end slopes, stored as [left_0, right_0, left_1, ...].
        table.slope.assign(2 * (n - 1), 0.0);
        table.value[0] = numerics::integrate(f, 0.0, nodes_[0], spec_);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double a = nodes_[i];
            const double b = nodes_[i + 1];
            table.value[i + 1] = table.value[i] + std::max(0.0, numerics::integrate(f, a, b, spec_));
            const double secant = (table.value[i + 1] - table.value[i]) / (b - a);
            double m0 = f(just_above(a));
            double m1 = f(b);
            // Fritsch-Carlson style clamp keeps every cubic piece monotone.
            if (secant <= 0.0) {
                m0 = m1 = 0.0;
            } else {
                m0 = std::clamp(m0, 0.0, 3.0 * secant);
                m1 = std::clamp(m1, 0.0, 3.0 * secant);
            }
            table.slope[2 * i] = m0;
            table.slope[2 * i + 1] = m1;
        }
    };
    tabulate(Path::LoS, los_);
    tabulate(Path::NLoS, nlos_);
}

double DistanceDistributions::pdf_unchecked(Path path, double r) const {
    const double los = model_.los_probability(r);
    const double prob = path == Path::LoS ? los : 1.0 - los;
    if (!(prob > 0.0)) return 0.0;
    const double los_mass_r = model_.los_radial_mass(r);
    double excluded;  // integral of (the competing path's probability) * u over its exclusion disc
    if (path == Path::LoS) {
        const double r1 = model_.r1_of(r);
        excluded = (0.5 * r1 * r1 - model_.los_radial_mass(r1)) + los_mass_r;
    } else {
        const double r2 = model_.r2_of(r);
        excluded = model_.los_radial_mass(r2) + (0.5 * r * r - los_mass_r);
    }
    return std::exp(-kTwoPi * lambda_ * excluded) * prob * kTwoPi * lambda_ * r;
}

double DistanceDistributions::pdf(Path path, double r_km) const {
    if (!(r_km > 0.0)) raise(ErrorCode::NonPositiveDistance, "serving-distance pdf needs r > 0");
    return pdf_unchecked(path, r_km);
}

double DistanceDistributions::total_mass(Path path) const { return path == Path::LoS ? mass_los_ : mass_nlos_; }

double DistanceDistributions::cdf_direct(Path path, double r_km) const {
    if (!(r_km > 0.0)) return 0.0;
    if (std::isinf(r_km)) return total_mass(path);
    const auto f = [this, path](double r) { return pdf_unchecked(path, r); };
    return numerics::integrate_split(f, split_points(r_km), spec_);
}

std::vector<double> DistanceDistributions::split_points(double upper_km) const {
    std::vector<double> points{0.0};
    for (double d : model_.break_points()) {
        if (d < upper_km) points.push_back(d);
    }
    points.push_back(upper_km);
    return points;
}

double DistanceDistributions::interpolate(const Table& table, double r) const {
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    if (i + 1 >= nodes_.size()) return table.value.back();
    const double a = nodes_[i];
    const double h = nodes_[i + 1] - a;
    const double t = (r - a) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * table.value[i] + h10 * h * table.slope[2 * i] + h01 * table.value[i + 1] +
           h11 * h * table.slope[2 * i + 1];
}

double DistanceDistributions::cdf(Path path, double r_km) const {
    if (!(r_km > 0.0)) return 0.0;
    if (r_km < nodes_.front()) return cdf_direct(path, r_km);
    if (r_km >= nodes_.back()) {
        // Less than kResidualMass lies beyond the last node.
        return path == Path::LoS ? mass_los_ : mass_nlos_;
    }
    return interpolate(path == Path::LoS ? los_ : nlos_, r_km);
}

}  // namespace scn
