#include "scn/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>

#include "scn/error.hpp"

namespace scn::numerics {

namespace {

// Kronrod abscissae (positive half) and weights; the Gauss weights pair with
// the odd-indexed Kronrod abscissae plus the centre.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const ScalarFn& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_centre = f(centre);
    double kronrod = f_centre * kWgk[7];
    double gauss = f_centre * kWg[3];
    double abs_sum = std::abs(kronrod);
    std::array<double, 7> f_left{};
    std::array<double, 7> f_right{};
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f_left[j] = f(centre - dx);
        f_right[j] = f(centre + dx);
        const double pair = f_left[j] + f_right[j];
        kronrod += kWgk[j] * pair;
        abs_sum += kWgk[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double asc = kWgk[7] * std::abs(f_centre - mean);
    for (std::size_t j = 0; j < 7; ++j) {
        asc += kWgk[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
    }
    asc *= std::abs(half);
    double error = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && error != 0.0) {
        error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
    }
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::abs(half);
    if (roundoff > std::numeric_limits<double>::min()) error = std::max(error, roundoff);
    return Panel{a, b, kronrod * half, error};
}

void check_finite(double value, double x) {
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os << "integrand is not finite at x=" << x;
        raise(ErrorCode::InvalidArgument, os.str());
    }
}

// Global adaptive subdivision over an initial partition of finite points.
double adaptive(const ScalarFn& raw, const std::vector<double>& points, const QuadratureSpec& spec) {
    const ScalarFn f = [&raw](double x) {
        const double y = raw(x);
        check_finite(y, x);
        return y;
    };
    std::priority_queue<Panel> queue;
    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (points[i + 1] <= points[i]) continue;
        Panel p = gauss_kronrod(f, points[i], points[i + 1]);
        total += p.value;
        total_error += p.error;
        queue.push(p);
    }
    int subdivisions = static_cast<int>(queue.size());
    auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
    while (total_error > tolerance()) {
        if (queue.empty()) break;  // every panel hit the roundoff floor
        if (subdivisions >= spec.max_subdivisions) {
            std::ostringstream os;
            os << "quadrature on [" << points.front() << ", " << points.back() << "] exhausted "
               << spec.max_subdivisions << " subdivisions (error " << total_error << ")";
            raise(ErrorCode::NonConvergence, os.str());
        }
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) < 64.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(std::abs(worst.a), std::abs(worst.b))) {
            continue;  // too narrow to split; its error stays in the total
        }
        const Panel left = gauss_kronrod(f, worst.a, mid);
        const Panel right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++subdivisions;
    }
    return total;
}

// Probe points a + h*2^k until |f|*(x-a) has dropped below eps * peak for
// two consecutive probes.
std::vector<double> tail_probe_points(const ScalarFn& f, double a, const QuadratureSpec& spec) {
    const double h0 = std::abs(a) > 0.0 ? std::abs(a) * 0.0625 : 1e-9;
    std::vector<double> points{a};
    double peak = 0.0;
    int quiet = 0;
    for (int k = 0; k < 160; ++k) {
        const double x = a + h0 * std::ldexp(1.0, k);
        const double y = f(x);
        check_finite(y, x);
        const double weight = std::abs(y) * (x - a);
        peak = std::max(peak, weight);
        // Partition at every third probe; the adaptive pass refines the rest.
        if (k % 3 == 0) points.push_back(x);
        if (peak > 0.0 && weight < spec.tail_cutoff_epsilon * peak) {
            if (++quiet >= 2) {
                if (points.back() != x) points.push_back(x);
                return points;
            }
        } else {
            quiet = 0;
        }
    }
    if (peak == 0.0) return {a, a + h0};
    raise(ErrorCode::NonConvergence, "integrand does not decay on the semi-infinite range");
}

double integrate_semi_infinite(const ScalarFn& f, double a, const QuadratureSpec& spec) {
    std::vector<double> points = tail_probe_points(f, a, spec);
    double value = adaptive(f, points, spec);
    double radius = points.back();
    // Confirm the cut by doubling the radius; keep extending while the extra
    // slab still matters.
    for (int extension = 0; extension < 64; ++extension) {
        const double slab = adaptive(f, {radius, 2.0 * radius}, spec);
        value += slab;
        radius *= 2.0;
        if (std::abs(slab) <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) return value;
    }
    raise(ErrorCode::NonConvergence, "semi-infinite tail did not settle under doubling");
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_subdivisions < 1 || !(tail_cutoff_epsilon > 0.0)) {
        raise(ErrorCode::InvalidArgument, "QuadratureSpec requires rel_tol > 0, abs_tol > 0, max_subdivisions >= 1");
    }
}

double integrate(const ScalarFn& f, double a, double b, const QuadratureSpec& spec) {
    const std::array<double, 2> points{a, b};
    return integrate_split(f, points, spec);
}

double integrate_split(const ScalarFn& f, std::span<const double> points, const QuadratureSpec& spec) {
    spec.validate();
    if (points.size() < 2) raise(ErrorCode::InvalidInterval, "need at least two points");
    const double a = points.front();
    const double b = points.back();
    if (!std::isfinite(a) || std::isnan(b) || !(a < b)) {
        std::ostringstream os;
        os << "expected finite a < b, got [" << a << ", " << b << "]";
        raise(ErrorCode::InvalidInterval, os.str());
    }
    std::vector<double> finite;
    finite.reserve(points.size());
    for (double p : points) {
        if (!std::isfinite(p)) break;
        if (p < a || (!finite.empty() && p < finite.back())) {
            raise(ErrorCode::InvalidInterval, "split points must be sorted");
        }
        finite.push_back(p);
    }
    if (std::isfinite(b)) return adaptive(f, finite, spec);
    double value = finite.size() > 1 ? adaptive(f, finite, spec) : 0.0;
    return value + integrate_semi_infinite(f, finite.back(), spec);
}

double find_root(const ScalarFn& f, double lo, double hi, double tol) {
    if (!(lo < hi)) raise(ErrorCode::InvalidInterval, "find_root needs lo < hi");
    if (!(tol > 0.0)) raise(ErrorCode::InvalidArgument, "find_root needs tol > 0");
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        std::ostringstream os;
        os << "f(" << lo << ")=" << f_lo << " and f(" << hi << ")=" << f_hi << " share a sign";
        raise(ErrorCode::NoBracket, os.str());
    }
    bool secant_turn = true;
    for (int iter = 0; iter < 2000 && (hi - lo) > tol; ++iter) {
        double x = 0.5 * (lo + hi);
        if (secant_turn) {
            const double s = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            if (s > lo && s < hi) x = s;
        }
        secant_turn = !secant_turn;
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (std::signbit(fx) == std::signbit(f_lo)) {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
    }
    return 0.5 * (lo + hi);
}

double minimize_scalar(const ScalarFn& f, double lo, double hi, double tol) {
    if (!(lo < hi)) raise(ErrorCode::InvalidInterval, "minimize_scalar needs lo < hi");
    if (!(tol > 0.0)) raise(ErrorCode::InvalidArgument, "minimize_scalar needs tol > 0");
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while ((b - a) > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> logspace(double lo, double hi, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {lo};
    std::vector<double> out(count);
    const double l0 = std::log10(lo);
    const double step = (std::log10(hi) - l0) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = std::pow(10.0, l0 + step * static_cast<double>(i));
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace scn::numerics
