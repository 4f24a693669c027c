#pragma once

#include <span>
#include <vector>

#include "scn/association.hpp"

namespace scn {

/// q of the classical nearest-BS (Voronoi-load) approximation.
inline constexpr double kVoronoiShape = 3.5;

/// Activated-BS density under nearest-BS association with Gamma-shape q:
/// lambda * (1 - (1 + rho / (q lambda))^-q). Returns lambda when rho is +inf.
double lambda0(double lambda_bs, double rho_ue, double q);

/// Probability that a UE at distance r from a given BS associates with some
/// other BS.
double prob_not_associated_given_r(const DistanceDistributions& dist, double r_km);

/// Probability that a BS has no UE attached, from the collapsed Poisson sum.
double prob_bs_idle(const DistanceDistributions& dist, double rho_ue);

double lambda_tilde_upper(const DistanceDistributions& dist, double rho_ue);
double lambda_tilde_lower(double lambda_bs, double rho_ue);

struct ActivationEstimate {
    double lambda_bs;
    double rho_ue;
    double upper_bound;
    double lower_bound;
    double approx;
    double q_used;
};

/// Bounds plus the calibrated approximation lambda0(q). Throws
/// NumericalInconsistency if the ordering lb <= approx <= ub <= lambda breaks.
ActivationEstimate estimate_activation(const DistanceDistributions& dist, double rho_ue, double q);

struct CalibrationResult {
    double q_star;
    double q_upper_limit;  // top of the search interval
    double mse;
    bool used_grid_scan;  // golden-section disagreed with the coarse scan
};

/// MMSE fit of q in lambda0(lambda_i, rho, q) against Monte Carlo activated
/// densities. The search runs on [3.5, q_hi], q_hi solving
/// lambda0(q_hi) = upper bound at the largest grid density (50 if no root).
CalibrationResult calibrate_q_star(const PathLossModel& model, double rho_ue, std::span<const double> lambda_grid,
                                   std::span<const double> mc_activated);

}  // namespace scn
