#pragma once

#include <iosfwd>
#include <vector>

#include "cip/market.hpp"
#include "cip/ou.hpp"
#include "cip/rate_curve.hpp"

namespace cip {

/// Spot price split into its annuity and information components;
/// S == annuity_term + info_term by construction. S may be negative — the
/// dividend model is Gaussian — and is never clamped.
struct SpotQuote {
    double t = 0.0;
    double S = 0.0;
    double annuity_term = 0.0;
    double info_term = 0.0;
};

/// Weight/discount state under a parameter schedule.
struct ScheduleBundle {
    double t = 0.0;
    double f = 0.0;        // ∫_0^t kappa_s ds
    double delta = 0.0;    // ∫_t^inf P_u e^{-f_u} du
    double z = 0.0;        // information weight
};

ScheduleBundle schedule_bundle(const Schedule& s, const RateCurve& curve, double sigma,
                               double t);

/// Constant-rate spot price from the current dividend level and information
/// value. t = 0 requires xi = 0 and evaluates the continuous limit.
SpotQuote spot_price(const MarketParams& mp, double t, double x, double xi);

/// Spot price under a piecewise-constant rate curve; equals spot_price when
/// the curve is flat.
SpotQuote spot_price_general(const OuParams& ou, double sigma, const RateCurve& curve,
                             double t, double x, double xi);

/// Spot price under a parameter schedule and rate curve; equals spot_price
/// when both are flat.
SpotQuote spot_price_inhom(const Schedule& s, const RateCurve& curve, double sigma, double t,
                           double x, double xi);

/// Elementwise spot_price over a simulated bundle.
std::vector<SpotQuote> spot_path(const PathBundle& bundle, const MarketParams& mp);

/// CSV header `t,S,annuity_term,info_term`, 15 significant digits.
void write_spot_csv(std::ostream& os, const std::vector<SpotQuote>& quotes);

} // namespace cip
