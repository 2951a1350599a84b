#pragma once

#include <iosfwd>
#include <vector>

#include "cip/market.hpp"

namespace cip {

/// Absolute price volatility. Strictly positive when sigma*psi > 0; equals
/// psi/(r+kappa) in the no-signal limit sigma -> 0 and vanishes when psi = 0.
double volatility_sigma(const MarketParams& mp, double t);

/// Conditional expectation, given time-t information, of the total discounted
/// dividend flow. A martingale; starts at (r x0 + kappa theta)/(r (r+kappa)).
std::vector<double> martingale_path(const PathBundle& bundle, const MarketParams& mp);

/// Brownian motion driving the price in the market's own filtration,
/// accumulated from the bundle's increments. dt-terms use left-point
/// evaluation (adapted integrands); the 0/0 at t = 0 is replaced by its
/// finite limit. Requires sigma*psi > 0.
std::vector<double> innovations_path(const PathBundle& bundle, const MarketParams& mp);

/// Diagnostic paths: closed-form price, the price re-integrated from its own
/// dynamics with the same innovations noise, and the driving W and M paths.
/// Integration starts at the first positive grid time, seeded with the
/// closed-form value there; earlier S_sde entries repeat the closed form.
struct SdePath {
    std::vector<double> t;
    std::vector<double> S_closed;
    std::vector<double> S_sde;
    std::vector<double> W;
    std::vector<double> M;
};

SdePath sde_path(const PathBundle& bundle, const MarketParams& mp);

/// Largest gap between the re-integrated and closed-form price over the
/// integration range of sde_path.
double sde_residual(const PathBundle& bundle, const MarketParams& mp);

/// CSV header `t,S_closed,S_sde,W,M`, 15 significant digits.
void write_sde_csv(std::ostream& os, const SdePath& path);

} // namespace cip
