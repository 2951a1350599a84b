#pragma once

#include <vector>

#include "cip/ou.hpp"

namespace cip {

// Maximum-likelihood fit of the mean-reverting dividend model to a regularly
// sampled series, via its exact AR(1) discretisation.
struct OuFit {
    OuParams params;        // x0 is set to the first observation
    double kappa_se = 0.0;
    double theta_se = 0.0;
    double psi_se = 0.0;
    double log_likelihood = 0.0;
    std::size_t n_obs = 0;  // number of transitions used
};

// Fits (kappa, theta, psi) to `series` observed at spacing `dt`.  Requires at
// least three observations, a non-constant series, and an AR(1) coefficient
// inside (0, 1); otherwise throws std::invalid_argument.
OuFit ou_fit(const std::vector<double>& series, double dt);

// Initial conditions backed out from an observed spot and its long-run level.
struct ImpliedInitials {
    double theta = 0.0;
    double x0 = 0.0;
};

// Inverts the time-0 price and the t -> infinity price limit for (theta, x0),
// holding (r, kappa) fixed.
ImpliedInitials implied_initials(double spot_0, double spot_inf, double r, double kappa);

}  // namespace cip
