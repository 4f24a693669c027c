#pragma once

#include <functional>

#include "scn/coverage.hpp"

namespace scn {

/// ASE request: the base query supplies model, network and active density;
/// its own threshold is ignored and replaced along the SINR sweep.
struct AseQuery {
    CoverageQuery base;
    double gamma0;  // minimum working SINR, linear

    CoverageQuery at(double gamma) const { return base.with_gamma(gamma); }
};

struct AseResult {
    double value;          // bps/Hz/km^2
    double boundary_term;  // lambda_tilde * log2(1+gamma0) * p_cov(gamma0)
    double gamma_max;      // truncation point of the SINR integral
    int nodes_per_decade;  // resolution that passed the doubling check
};

/// ASE from any SINR CCDF via integration by parts:
/// lambda_tilde * [log2(1+g0) p(g0) + (1/ln 2) * integral_{g0}^{inf} p(g)/(1+g) dg].
/// The integral runs on a log-SINR Simpson grid, 64 nodes per decade doubled
/// until two resolutions agree, cut where p < 1e-6 plus a power-law tail estimate.
AseResult ase_from_ccdf(const std::function<double(double)>& ccdf, double lambda_tilde, double gamma0);

AseResult ase(const AseQuery& q, const DistanceDistributions& dist);

}  // namespace scn
