#include "cip/derivatives.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "cip/numeric.hpp"

namespace cip {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

// Loading of omega_t on the futures price for delivery at T; finite at t = 0.
double futures_omega_loading(const MarketParams& mp, double t, double T) {
    const double zT = discount_bundle(mp, T).z;
    const double zt = discount_bundle(mp, t).z;
    return std::exp(mp.r * T) *
           (zT * info_gain(mp, t) + info_gain(mp, T) * (1.0 - zt));
}

} // namespace

void OptionSpec::validate() const {
    if (!(maturity > 0.0)) throw std::invalid_argument("OptionSpec: maturity must be > 0");
    if (!std::isfinite(strike)) throw std::invalid_argument("OptionSpec: strike must be finite");
    if (underlying == Underlying::futures && !(maturity <= futures_maturity))
        throw std::invalid_argument(
            "OptionSpec: futures maturity must be >= option maturity");
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double gaussian_call(const GaussianLaw& law, double strike, double discount_factor) {
    if (!(law.variance >= 0.0))
        throw std::invalid_argument("gaussian_call: variance must be >= 0");
    if (!(discount_factor > 0.0) || !(discount_factor <= 1.0))
        throw std::invalid_argument("gaussian_call: discount factor must be in (0,1]");
    const double m = law.mean - strike;
    if (law.variance == 0.0) return discount_factor * std::max(m, 0.0);
    const double sd = std::sqrt(law.variance);
    const double d = m / sd;
    return discount_factor * (sd * kInvSqrt2Pi * std::exp(-0.5 * d * d) + m * norm_cdf(d));
}

double gaussian_put(const GaussianLaw& law, double strike, double discount_factor) {
    if (!(law.variance >= 0.0))
        throw std::invalid_argument("gaussian_put: variance must be >= 0");
    if (!(discount_factor > 0.0) || !(discount_factor <= 1.0))
        throw std::invalid_argument("gaussian_put: discount factor must be in (0,1]");
    const double m = law.mean - strike;
    if (law.variance == 0.0) return discount_factor * std::max(-m, 0.0);
    const double sd = std::sqrt(law.variance);
    const double d = m / sd;
    return discount_factor * (sd * kInvSqrt2Pi * std::exp(-0.5 * d * d) - m * norm_cdf(-d));
}

GaussianLaw spot_terminal_law(const MarketParams& mp, double T) {
    mp.validate();
    if (!(T > 0.0)) throw std::invalid_argument("spot_terminal_law: T must be > 0");
    const double rk = mp.r + mp.ou.kappa;
    const double psi = mp.ou.psi;
    GaussianLaw law;
    law.mean = (mp.ou.kappa * mp.ou.theta + mp.r * ou_mean(mp.ou, T)) / (mp.r * rk);
    const double zT = discount_bundle(mp, T).z;
    const double u = mp.sigma * mp.sigma * psi * psi * T;
    const double v = 2.0 * mp.r * rk * rk * std::exp(2.0 * mp.r * T);
    law.variance = ou_variance(mp.ou, T) / (rk * rk) +
                   zT * zT * psi * psi / (2.0 * mp.r * rk * rk) +
                   mp.sigma * mp.sigma * psi * psi * psi * psi * T *
                       std::exp(2.0 * mp.r * T) / ((u + v) * (u + v));
    return law;
}

double call_on_spot(const MarketParams& mp, const OptionSpec& spec) {
    spec.validate();
    if (spec.underlying != OptionSpec::Underlying::spot)
        throw std::invalid_argument("call_on_spot: spec must reference the spot");
    return gaussian_call(spot_terminal_law(mp, spec.maturity), spec.strike,
                         std::exp(-mp.r * spec.maturity));
}

FuturesQuote futures_price(const MarketParams& mp, double t, double T, double x,
                           double omega) {
    mp.validate();
    if (!(t >= 0.0) || !(t <= T))
        throw std::invalid_argument("futures_price: need 0 <= t <= T");
    const double rk = mp.r + mp.ou.kappa;
    FuturesQuote q;
    q.t = t;
    q.T = T;
    q.F = (rk * mp.ou.theta + mp.r * (x - mp.ou.theta) * std::exp(-mp.ou.kappa * (T - t))) /
              (mp.r * rk) +
          futures_omega_loading(mp, t, T) * omega;
    return q;
}

GaussianLaw futures_terminal_law(const MarketParams& mp, double t, double T) {
    mp.validate();
    if (!(t > 0.0) || !(t <= T))
        throw std::invalid_argument("futures_terminal_law: need 0 < t <= T");
    const double rk = mp.r + mp.ou.kappa;
    const double psi = mp.ou.psi;
    const double zt = discount_bundle(mp, t).z;
    const double loading = futures_omega_loading(mp, t, T);
    GaussianLaw law;
    law.mean = futures_price(mp, 0.0, T, mp.ou.x0, 0.0).F;
    // Var[omega_t] = t / (1 - z_t).
    law.variance = psi * psi * std::exp(-2.0 * mp.ou.kappa * (T - t)) *
                       one_m_exp(2.0 * mp.ou.kappa * t) / (2.0 * mp.ou.kappa * rk * rk) +
                   loading * loading * t / (1.0 - zt);
    return law;
}

double call_on_futures(const MarketParams& mp, const OptionSpec& spec) {
    spec.validate();
    if (spec.underlying != OptionSpec::Underlying::futures)
        throw std::invalid_argument("call_on_futures: spec must reference a futures price");
    return gaussian_call(futures_terminal_law(mp, spec.maturity, spec.futures_maturity),
                         spec.strike, std::exp(-mp.r * spec.maturity));
}

void write_call_surface(std::ostream& os, const MarketParams& base, double strike,
                        double theta_min, double theta_max, std::size_t theta_steps,
                        double t_min, double t_max, std::size_t t_steps) {
    base.validate();
    if (!(theta_steps >= 2) || !(t_steps >= 2))
        throw std::invalid_argument("write_call_surface: need at least 2 steps per axis");
    if (!(theta_max > theta_min) || !(t_max > t_min) || !(t_min > 0.0))
        throw std::invalid_argument("write_call_surface: invalid ranges");
    os.precision(15);
    os << "S0,theta,T,call_price\n";
    const double rk = base.r + base.ou.kappa;
    for (std::size_t i = 0; i < theta_steps; ++i) {
        MarketParams mp = base;
        mp.ou.theta = theta_min + (theta_max - theta_min) * static_cast<double>(i) /
                                      static_cast<double>(theta_steps - 1);
        const double s0 =
            (mp.ou.kappa * mp.ou.theta + base.r * mp.ou.x0) / (base.r * rk);
        for (std::size_t j = 0; j < t_steps; ++j) {
            const double T = t_min + (t_max - t_min) * static_cast<double>(j) /
                                         static_cast<double>(t_steps - 1);
            OptionSpec spec;
            spec.strike = strike;
            spec.maturity = T;
            os << s0 << ',' << mp.ou.theta << ',' << T << ','
               << call_on_spot(mp, spec) << '\n';
        }
    }
}

} // namespace cip
