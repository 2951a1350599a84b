#include "cip/dynamics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cip/numeric.hpp"
#include "cip/pricing.hpp"

namespace cip {

double volatility_sigma(const MarketParams& mp, double t) {
    mp.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("volatility_sigma: t must be >= 0");
    const double rk = mp.r + mp.ou.kappa;
    const double psi = mp.ou.psi;
    const double u = mp.sigma * mp.sigma * psi * psi * t;
    const double v = 2.0 * mp.r * rk * rk * std::exp(2.0 * mp.r * t);
    const double root = std::sqrt(4.0 * mp.r * mp.r * rk * rk * std::exp(2.0 * mp.r * t) +
                                  mp.sigma * mp.sigma * psi * psi);
    return std::exp(mp.r * t) * psi * root / (u + v);
}

std::vector<double> martingale_path(const PathBundle& bundle, const MarketParams& mp) {
    mp.validate();
    const double rk = mp.r + mp.ou.kappa;
    const double m0 =
        (mp.r * mp.ou.x0 + mp.ou.kappa * mp.ou.theta) / (mp.r * rk);
    std::vector<double> m(bundle.grid.size());
    for (std::size_t j = 0; j < bundle.grid.size(); ++j)
        m[j] = mp.ou.psi / rk * bundle.discounted_beta[j] +
               info_gain(mp, bundle.grid[j]) * bundle.omega[j] + m0;
    return m;
}

std::vector<double> innovations_path(const PathBundle& bundle, const MarketParams& mp) {
    mp.validate();
    if (!(mp.sigma * mp.ou.psi > 0.0))
        throw std::invalid_argument("innovations_path: requires sigma > 0 and psi > 0");
    const double r = mp.r, rk = mp.r + mp.ou.kappa;
    const double sp = mp.sigma * mp.ou.psi;
    const std::size_t n = bundle.grid.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double t = bundle.grid[j];
        const double dt = bundle.grid[j + 1] - t;
        const DiscountBundle db = discount_bundle(mp, t);
        // Raw dividend-noise increment recovered from the discounted one.
        const double dbeta =
            std::exp(2.0 * r * t) * (bundle.discounted_beta[j + 1] - bundle.discounted_beta[j]);
        double drift;
        if (t == 0.0) {
            drift = sp / rk * bundle.G[0];    // limit of the two 1/t terms
        } else {
            drift = (1.0 - 2.0 * r * t) * (1.0 - db.z) / t * bundle.omega[j] - bundle.B[j] / t;
        }
        const double dB = bundle.B[j + 1] - bundle.B[j];
        w[j + 1] = w[j] + db.D * (2.0 * r * rk / sp * dbeta + drift * dt + dB);
    }
    return w;
}

SdePath sde_path(const PathBundle& bundle, const MarketParams& mp) {
    const std::vector<SpotQuote> closed = spot_path(bundle, mp);
    const std::vector<double> w = innovations_path(bundle, mp);
    const std::vector<double> m = martingale_path(bundle, mp);
    const std::size_t n = bundle.grid.size();

    SdePath out;
    out.t.resize(n);
    out.S_closed.resize(n);
    out.S_sde.resize(n);
    out.W = w;
    out.M = m;

    std::size_t start = 0;
    while (start < n && bundle.grid[start] == 0.0) ++start;
    for (std::size_t j = 0; j < n; ++j) {
        out.t[j] = bundle.grid[j];
        out.S_closed[j] = closed[j].S;
        if (j <= start) out.S_sde[j] = closed[j].S;
    }
    for (std::size_t j = start; j + 1 < n; ++j) {
        const double dt = bundle.grid[j + 1] - bundle.grid[j];
        out.S_sde[j + 1] = out.S_sde[j] +
                           (mp.r * out.S_sde[j] - bundle.X[j]) * dt +
                           volatility_sigma(mp, bundle.grid[j]) * (w[j + 1] - w[j]);
    }
    return out;
}

double sde_residual(const PathBundle& bundle, const MarketParams& mp) {
    const SdePath p = sde_path(bundle, mp);
    double worst = 0.0;
    for (std::size_t j = 0; j < p.t.size(); ++j)
        worst = std::max(worst, std::fabs(p.S_sde[j] - p.S_closed[j]));
    return worst;
}

void write_sde_csv(std::ostream& os, const SdePath& path) {
    os.precision(15);
    os << "t,S_closed,S_sde,W,M\n";
    for (std::size_t j = 0; j < path.t.size(); ++j)
        os << path.t[j] << ',' << path.S_closed[j] << ',' << path.S_sde[j] << ',' << path.W[j]
           << ',' << path.M[j] << '\n';
}

} // namespace cip
