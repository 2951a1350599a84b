#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cip/ou.hpp"
#include "cip/rate_curve.hpp"
#include "cip/rng.hpp"

namespace cip {

/// Full model constants: dividend process, information flow rate, short rate.
struct MarketParams {
    OuParams ou;
    double sigma = 0.0;    // information flow rate, >= 0
    double r = 0.0;        // short rate, > 0

    void validate() const;
};

/// Deterministic per-time quantities under a constant rate.
///   P  discount factor
///   p  perpetual annuity P/r
///   q  damped annuity P/(r+kappa)
///   z  information weight in [0,1]
///   V  conditional variance of the discounted future-dividend aggregate
///   D  volatility damping coefficient
struct DiscountBundle {
    double t = 0.0;
    double P = 1.0;
    double p = 0.0;
    double q = 0.0;
    double z = 0.0;
    double V = 0.0;
    double D = 0.0;
};

DiscountBundle discount_bundle(const MarketParams& mp, double t);

/// z_t / (sigma t): the loading of the information value on the discounted
/// price. Finite for all t >= 0 and for sigma = 0, unlike the ratio itself.
double info_gain(const MarketParams& mp, double t);

/// Information weight under a piecewise-constant rate curve; reduces to
/// discount_bundle(...).z for a constant curve.
double weight_z_general(const OuParams& ou, double sigma, const RateCurve& curve, double t);

/// One jointly simulated path. All integrals against the dividend Brownian
/// motion are sampled exactly (no quadrature), including the unbounded tail
///   G_t = ∫_t^inf e^{-ru} dbeta_u,
/// so xi and omega are exact in distribution on the grid.
struct PathBundle {
    TimeGrid grid;
    std::vector<double> X;                  // dividend path
    std::vector<double> B;                  // information-noise Brownian path
    std::vector<double> G;                  // tail integral path
    std::vector<double> xi;                 // information process
    std::vector<double> omega;              // information process net of the known past
    std::vector<double> discounted_beta;    // running ∫_0^t e^{-ru} dbeta_u
};

/// Exact-in-distribution joint sample on the grid (grid starts at 0, at least
/// two points). Consumes three draws per step — the correlated pair for the
/// beta integrals, then the B increment — and one final draw for the tail, so
/// draw alignment is independent of parameter degeneracies.
PathBundle simulate_joint(const MarketParams& mp, const TimeGrid& grid, Rng& rng);
PathBundle simulate_joint(const MarketParams& mp, const TimeGrid& grid, std::uint64_t seed);

/// Largest grid-point violation of the identity tying xi to omega and the
/// accumulated discounted dividends. Near zero on any exact bundle; grows with
/// any tampered input, so it doubles as a corruption detector.
double xi_omega_consistency(const PathBundle& bundle, const MarketParams& mp);

/// CSV header `t,X,B,G,xi,omega`, 15 significant digits.
void write_path_csv(std::ostream& os, const PathBundle& bundle);

} // namespace cip
