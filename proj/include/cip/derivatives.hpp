#pragma once

#include <iosfwd>

#include "cip/market.hpp"

namespace cip {

/// Normal law of a terminal price; all option pricing reduces to this.
struct GaussianLaw {
    double mean = 0.0;
    double variance = 0.0;    // >= 0
};

struct OptionSpec {
    enum class Underlying { spot, futures };

    double strike = 0.0;
    double maturity = 0.0;              // option maturity, > 0
    Underlying underlying = Underlying::spot;
    double futures_maturity = 0.0;      // required >= maturity for futures

    void validate() const;
};

struct FuturesQuote {
    double t = 0.0;
    double T = 0.0;
    double F = 0.0;
};

double norm_cdf(double x);

/// Discounted expectation of (Z - K)^+ for Z ~ law. Degenerates to
/// df * max(mean - K, 0) at zero variance. Strikes may be negative.
double gaussian_call(const GaussianLaw& law, double strike, double discount_factor);

/// Mirror formula for (K - Z)^+.
double gaussian_put(const GaussianLaw& law, double strike, double discount_factor);

/// Unconditional law of the spot price at T > 0.
GaussianLaw spot_terminal_law(const MarketParams& mp, double T);

double call_on_spot(const MarketParams& mp, const OptionSpec& spec);

/// Futures price at t for delivery at T, given the dividend level and
/// information value at t. t = 0 evaluates the (deterministic) limit.
FuturesQuote futures_price(const MarketParams& mp, double t, double T, double x, double omega);

/// Unconditional law of the futures price at option maturity t, 0 < t <= T.
/// Its mean is the initial futures price for every t.
GaussianLaw futures_terminal_law(const MarketParams& mp, double t, double T);

double call_on_futures(const MarketParams& mp, const OptionSpec& spec);

/// Call-price grid over a reversion-level range (which moves the initial
/// price) and a maturity range. CSV header `S0,theta,T,call_price`.
void write_call_surface(std::ostream& os, const MarketParams& base, double strike,
                        double theta_min, double theta_max, std::size_t theta_steps,
                        double t_min, double t_max, std::size_t t_steps);

} // namespace cip
