#include "scn/pathloss.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "scn/error.hpp"
#include "scn/numerics.hpp"

namespace scn {

namespace {

constexpr std::size_t kValidationSamples = 10000;
constexpr double kSmallestSampleKm = 1e-6;

std::string describe(double r) {
    std::ostringstream os;
    os.precision(10);
    os << r;
    return os.str();
}

}  // namespace

const char* to_string(Path path) noexcept { return path == Path::LoS ? "LoS" : "NLoS"; }

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

LosProbability LosProbability::linear(double intercept, double slope) {
    LosProbability p;
    p.linear_ = std::make_pair(intercept, slope);
    p.fn_ = [intercept, slope](double r) { return intercept + slope * r; };
    return p;
}

LosProbability LosProbability::custom(std::function<double(double)> fn) {
    if (!fn) raise(ErrorCode::InvalidModel, "LoS probability function is empty");
    LosProbability p;
    p.fn_ = std::move(fn);
    return p;
}

double LosProbability::operator()(double r_km) const { return fn_(r_km); }

PathLossModel::PathLossModel(std::string name, std::vector<PathLossSegment> segments) {
    if (segments.empty()) raise(ErrorCode::InvalidModel, "path-loss model needs at least one segment");
    auto data = std::make_shared<Data>();
    data->name = std::move(name);
    data->segments = std::move(segments);
    data_ = data;
    validate();

    // Radial LoS mass at every segment start, accumulated front to back.
    data->mass_at_start.assign(data->segments.size(), 0.0);
    double start = 0.0;
    for (std::size_t n = 0; n + 1 < data->segments.size(); ++n) {
        const double end = data->segments[n].end_km;
        data->mass_at_start[n + 1] = data->mass_at_start[n] + segment_radial_mass(n, start, end);
        start = end;
    }
}

void PathLossModel::validate() const {
    const auto& segs = data_->segments;
    double previous_end = 0.0;
    for (std::size_t n = 0; n < segs.size(); ++n) {
        const auto& s = segs[n];
        const bool last = n + 1 == segs.size();
        if (last ? !std::isinf(s.end_km) : !(s.end_km > previous_end && std::isfinite(s.end_km))) {
            raise(ErrorCode::InvalidModel, "segment break distances must increase strictly and the last segment must extend to infinity");
        }
        if (!(s.los_amplitude > 0.0) || !(s.nlos_amplitude > 0.0) || !(s.los_exponent > 0.0) ||
            !(s.nlos_exponent > 0.0)) {
            raise(ErrorCode::InvalidModel, "segment " + std::to_string(n) + " needs positive amplitudes and exponents");
        }
        previous_end = s.end_km;
    }
    const auto& tail = segs.back();
    if (!(tail.nlos_exponent > 2.0)) {
        raise(ErrorCode::ExponentTooSmall, "the outermost NLoS exponent must exceed 2 for interference to stay finite");
    }

    // Dense sampling: both stacked gains strictly decreasing, Pr^L a
    // non-increasing probability, LoS never weaker than NLoS beyond the floor.
    double prev_los = std::numeric_limits<double>::infinity();
    double prev_nlos = prev_los;
    double prev_prob = 1.0;
    double start = 0.0;
    for (std::size_t n = 0; n < segs.size(); ++n) {
        const double end = segs[n].end_km;
        const double lo = std::max(start * (1.0 + 1e-12), kSmallestSampleKm);
        const double hi = std::isinf(end) ? std::max(start, 1.0) * 1e4 : end;
        for (double r : numerics::logspace(lo, hi, kValidationSamples)) {
            const double g_los = segment_gain(Path::LoS, n, r);
            const double g_nlos = segment_gain(Path::NLoS, n, r);
            const double prob = segs[n].los_probability(r);
            if (!(g_los < prev_los) || !(g_nlos < prev_nlos)) {
                raise(ErrorCode::InvalidModel, "path gain is not strictly decreasing near r=" + describe(r) + " km");
            }
            if (!(prob >= 0.0 && prob <= 1.0) || prob > prev_prob + 1e-12) {
                raise(ErrorCode::InvalidModel, "LoS probability leaves [0,1] or increases near r=" + describe(r) + " km");
            }
            if (r >= kDominanceFloorKm && g_los < g_nlos) {
                raise(ErrorCode::InvalidModel, "NLoS gain exceeds LoS gain at r=" + describe(r) + " km");
            }
            if (std::isinf(end) && !(tail.los_exponent > 2.0) && prob > 0.0 && r > 10.0 * std::max(start, 1.0)) {
                raise(ErrorCode::ExponentTooSmall, "LoS exponent <= 2 with non-vanishing LoS probability in the outermost segment");
            }
            prev_los = g_los;
            prev_nlos = g_nlos;
            prev_prob = prob;
        }
        start = end;
    }
}

bool PathLossModel::same_as(const PathLossModel& other) const noexcept {
    if (data_ == other.data_) return true;
    const auto& a = data_->segments;
    const auto& b = other.data_->segments;
    if (data_->name != other.data_->name || a.size() != b.size()) return false;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const auto& x = a[n];
        const auto& y = b[n];
        if (x.end_km != y.end_km || x.los_amplitude != y.los_amplitude || x.los_exponent != y.los_exponent ||
            x.nlos_amplitude != y.nlos_amplitude || x.nlos_exponent != y.nlos_exponent) {
            return false;
        }
        if (!x.los_probability.is_linear() || !y.los_probability.is_linear() ||
            x.los_probability.intercept() != y.los_probability.intercept() ||
            x.los_probability.slope() != y.los_probability.slope()) {
            return false;
        }
    }
    return true;
}

std::vector<double> PathLossModel::break_points() const {
    std::vector<double> out;
    for (std::size_t n = 0; n + 1 < data_->segments.size(); ++n) out.push_back(data_->segments[n].end_km);
    return out;
}

std::size_t PathLossModel::segment_index(double r_km) const {
    const auto& segs = data_->segments;
    for (std::size_t n = 0; n + 1 < segs.size(); ++n) {
        if (r_km <= segs[n].end_km) return n;
    }
    return segs.size() - 1;
}

double PathLossModel::segment_gain(Path path, std::size_t n, double r_km) const {
    const auto& s = data_->segments[n];
    return path == Path::LoS ? s.los_amplitude * std::pow(r_km, -s.los_exponent)
                             : s.nlos_amplitude * std::pow(r_km, -s.nlos_exponent);
}

double PathLossModel::zeta(Path path, double r_km) const {
    if (!(r_km > 0.0)) raise(ErrorCode::NonPositiveDistance, "zeta needs r > 0, got " + describe(r_km));
    return segment_gain(path, segment_index(r_km), r_km);
}

double PathLossModel::los_probability(double r_km) const {
    const double r = std::max(r_km, 0.0);
    return data_->segments[segment_index(r)].los_probability(r);
}

double PathLossModel::gain_envelope(double r_km) const {
    const double nlos = zeta(Path::NLoS, r_km);
    return los_probability(r_km) > 0.0 ? std::max(nlos, zeta(Path::LoS, r_km)) : nlos;
}

double PathLossModel::invert_stacked(Path path, double target_gain) const {
    const auto& segs = data_->segments;
    double start = 0.0;
    for (std::size_t n = 0; n < segs.size(); ++n) {
        const auto& s = segs[n];
        const double amplitude = path == Path::LoS ? s.los_amplitude : s.nlos_amplitude;
        const double exponent = path == Path::LoS ? s.los_exponent : s.nlos_exponent;
        const double candidate = std::pow(amplitude / target_gain, 1.0 / exponent);
        if (candidate > start && candidate <= s.end_km) return candidate;
        start = s.end_km;
    }
    // The target sits in a downward jump at a break point: bisect in log-r,
    // which converges onto the break.
    const auto residual = [&](double log_r) { return std::log(zeta(path, std::exp(log_r)) / target_gain); };
    const double x = numerics::find_root(residual, std::log(1e-12), std::log(1e12), 1e-14);
    return std::exp(x);
}

double PathLossModel::r1_of(double r_km) const {
    return invert_stacked(Path::NLoS, zeta(Path::LoS, r_km));
}

double PathLossModel::r2_of(double r_km) const {
    return invert_stacked(Path::LoS, zeta(Path::NLoS, r_km));
}

double PathLossModel::segment_radial_mass(std::size_t n, double from, double to) const {
    if (!(to > from)) return 0.0;
    const auto& prob = data_->segments[n].los_probability;
    if (prob.is_linear()) {
        const double a = prob.intercept();
        const double b = prob.slope();
        if (a == 0.0 && b == 0.0) return 0.0;
        return a * (to * to - from * from) / 2.0 + b * (to * to * to - from * from * from) / 3.0;
    }
    numerics::QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    spec.abs_tol = 1e-16;
    return numerics::integrate([&prob](double u) { return prob(u) * u; }, from, to, spec);
}

double PathLossModel::los_radial_mass(double r_km) const {
    if (!(r_km > 0.0)) return 0.0;
    const std::size_t n = segment_index(r_km);
    const double start = n == 0 ? 0.0 : data_->segments[n - 1].end_km;
    const double mass = data_->mass_at_start.empty() ? 0.0 : data_->mass_at_start[n];
    return mass + segment_radial_mass(n, start, r_km);
}

PathLossModel make_3gpp_case1(const Case1Parameters& p) {
    std::vector<PathLossSegment> segments{
        {p.d1_km, p.los_amplitude, p.los_exponent, p.nlos_amplitude, p.nlos_exponent,
         LosProbability::linear(1.0, -1.0 / p.d1_km)},
        {std::numeric_limits<double>::infinity(), p.los_amplitude, p.los_exponent, p.nlos_amplitude,
         p.nlos_exponent, LosProbability::constant(0.0)},
    };
    return PathLossModel("3gpp-case1", std::move(segments));
}

PathLossModel make_single_slope(double alpha, double amplitude) {
    if (!(alpha > 2.0)) raise(ErrorCode::ExponentTooSmall, "single-slope exponent must exceed 2, got " + describe(alpha));
    std::vector<PathLossSegment> segments{
        {std::numeric_limits<double>::infinity(), amplitude, alpha, amplitude, alpha, LosProbability::constant(0.0)},
    };
    return PathLossModel("single-slope", std::move(segments));
}

void NetworkConfig::validate() const {
    if (!(lambda_bs > 0.0) || std::isinf(lambda_bs)) raise(ErrorCode::InvalidArgument, "lambda_bs must be positive and finite");
    if (!(rho_ue >= 0.0)) raise(ErrorCode::InvalidArgument, "rho_ue must be >= 0");
    if (!(tx_power_mw > 0.0)) raise(ErrorCode::InvalidArgument, "tx_power_mw must be positive");
    if (!(noise_power_mw > 0.0)) raise(ErrorCode::InvalidArgument, "noise_power_mw must be positive");
}

}  // namespace scn
