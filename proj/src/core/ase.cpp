#include "scn/ase.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "scn/error.hpp"

namespace scn {

namespace {

constexpr double kCcdfFloor = 1e-6;
constexpr int kBaseNodesPerDecade = 64;
constexpr int kMaxNodesPerDecade = 1024;
constexpr double kAgreement = 1e-5;
constexpr int kMaxDecades = 16;

}  // namespace

AseResult ase_from_ccdf(const std::function<double(double)>& ccdf, double lambda_tilde, double gamma0) {
    if (!(gamma0 > 0.0)) raise(ErrorCode::InvalidArgument, "gamma0 must be positive");
    if (!(lambda_tilde >= 0.0)) raise(ErrorCode::InvalidArgument, "active density must be >= 0");

    AseResult result{};
    const double p0 = ccdf(gamma0);
    result.boundary_term = lambda_tilde * std::log2(1.0 + gamma0) * p0;

    // Whole decades above gamma0 until the CCDF is negligible.
    int decades = 0;
    double p_top = p0;
    double p_below_top = p0;
    while (p_top >= kCcdfFloor) {
        if (++decades > kMaxDecades) raise(ErrorCode::NonConvergence, "SINR CCDF does not decay");
        p_below_top = p_top;
        p_top = ccdf(gamma0 * std::pow(10.0, decades));
    }
    if (decades == 0) {
        // p(gamma0) is already negligible; keep one decade so the grid is non-empty.
        decades = 1;
        p_below_top = p0;
        p_top = ccdf(gamma0 * 10.0);
    }
    result.gamma_max = gamma0 * std::pow(10.0, decades);

    // g(t) = p(gamma) * gamma * ln10 / (1 + gamma), gamma = gamma0 * 10^t.
    const auto g = [&](double t) {
        const double gamma = gamma0 * std::pow(10.0, t);
        return ccdf(gamma) * std::numbers::ln10 * gamma / (1.0 + gamma);
    };

    // Simpson on a grid refined in place: level 2n reuses every node of level n.
    // The first check compares the base grid against its own every-other-node
    // subset, so no extra evaluations are spent when that already agrees.
    int per_decade = kBaseNodesPerDecade;
    std::size_t intervals = static_cast<std::size_t>(per_decade * decades);
    std::vector<double> values(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) values[i] = g(static_cast<double>(i) / per_decade);
    const auto simpson = [](const std::vector<double>& v, std::size_t stride, double h) {
        const std::size_t n = (v.size() - 1) / stride;
        double sum = v.front() + v.back();
        for (std::size_t i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * v[i * stride];
        return sum * h / 3.0;
    };
    double coarse = simpson(values, 2, 2.0 / per_decade);
    double fine = simpson(values, 1, 1.0 / per_decade);
    while (std::abs(fine - coarse) > kAgreement * std::abs(fine) && per_decade < kMaxNodesPerDecade) {
        const int finer = per_decade * 2;
        std::vector<double> refined(2 * intervals + 1);
        for (std::size_t i = 0; i <= intervals; ++i) refined[2 * i] = values[i];
        for (std::size_t i = 0; i < intervals; ++i) refined[2 * i + 1] = g((2.0 * i + 1.0) / finer);
        values = std::move(refined);
        intervals *= 2;
        per_decade = finer;
        coarse = fine;
        fine = simpson(values, 1, 1.0 / per_decade);
    }
    const double integral = fine + (fine - coarse) / 15.0;  // Richardson
    result.nodes_per_decade = per_decade;

    // Beyond gamma_max assume p ~ gamma^-k with k read off the last decade;
    // the tail integral of p/(1+gamma) is then about p(gamma_max)/k.
    double tail = 0.0;
    if (p_top > 0.0 && p_below_top > p_top) {
        const double k = std::log10(p_below_top / p_top);
        if (k > 0.1) tail = p_top / k;
    }
    result.value = result.boundary_term + lambda_tilde * (integral + tail) / std::numbers::ln2;
    return result;
}

AseResult ase(const AseQuery& q, const DistanceDistributions& dist) {
    const auto ccdf = [&](double gamma) { return coverage_probability(q.at(gamma), dist); };
    return ase_from_ccdf(ccdf, q.base.lambda_tilde(), q.gamma0);
}

}  // namespace scn
