#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace scn::numerics {

using ScalarFn = std::function<double(double)>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    // Semi-infinite ranges are cut where |f(x)|*(x-a) drops below this
    // fraction of its running peak.
    double tail_cutoff_epsilon = 1e-12;

    void validate() const;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature. `b` may be +infinity.
double integrate(const ScalarFn& f, double a, double b, const QuadratureSpec& spec = {});

/// Same as integrate() but with the interval pre-split at `points`
/// (sorted, first = lower limit, last = upper limit, which may be +infinity).
/// Used wherever the integrand has a known kink.
double integrate_split(const ScalarFn& f, std::span<const double> points,
                       const QuadratureSpec& spec = {});

/// Bracketed root: bisection every other step, secant in between.
double find_root(const ScalarFn& f, double lo, double hi, double tol);

/// Golden-section search. Assumes f is unimodal on [lo, hi]; the result is
/// meaningless otherwise.
double minimize_scalar(const ScalarFn& f, double lo, double hi, double tol);

std::vector<double> logspace(double lo, double hi, std::size_t count);

}  // namespace scn::numerics
