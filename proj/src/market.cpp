#include "cip/market.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cip/numeric.hpp"

namespace cip {

void MarketParams::validate() const {
    ou.validate();
    if (!(r > 0.0)) throw std::invalid_argument("MarketParams: r must be > 0");
    if (!(sigma >= 0.0)) throw std::invalid_argument("MarketParams: sigma must be >= 0");
}

namespace {

// Shared split of the weight denominator: z = u/(u+v), u = sigma^2 psi^2 t,
// v = 2r(r+kappa)^2 e^{2rt}.
struct WeightParts {
    double u = 0.0;
    double v = 0.0;
};

WeightParts weight_parts(const MarketParams& mp, double t) {
    const double rk = mp.r + mp.ou.kappa;
    WeightParts w;
    w.u = mp.sigma * mp.sigma * mp.ou.psi * mp.ou.psi * t;
    w.v = 2.0 * mp.r * rk * rk * std::exp(2.0 * mp.r * t);
    return w;
}

} // namespace

DiscountBundle discount_bundle(const MarketParams& mp, double t) {
    mp.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("discount_bundle: t must be >= 0");
    const double rk = mp.r + mp.ou.kappa;
    const auto [u, v] = weight_parts(mp, t);
    DiscountBundle b;
    b.t = t;
    b.P = std::exp(-mp.r * t);
    b.p = b.P / mp.r;
    b.q = b.P / rk;
    b.z = u / (u + v);
    b.V = mp.ou.psi * mp.ou.psi / (u + v);
    const double sp = mp.sigma * mp.ou.psi;
    b.D = sp / std::sqrt(4.0 * mp.r * mp.r * rk * rk * std::exp(2.0 * mp.r * t) + sp * sp);
    return b;
}

double info_gain(const MarketParams& mp, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("info_gain: t must be >= 0");
    const auto [u, v] = weight_parts(mp, t);
    return mp.sigma * mp.ou.psi * mp.ou.psi / (u + v);
}

double weight_z_general(const OuParams& ou, double sigma, const RateCurve& curve, double t) {
    ou.validate();
    curve.validate();
    if (!(sigma >= 0.0)) throw std::invalid_argument("weight_z_general: sigma must be >= 0");
    if (!(t >= 0.0)) throw std::invalid_argument("weight_z_general: t must be >= 0");
    const double a = sigma * sigma * ou.psi * ou.psi * t *
                     curve.damped_annuity_sq_tail(t, ou.kappa);
    return a / (1.0 + a);
}

PathBundle simulate_joint(const MarketParams& mp, const TimeGrid& grid, Rng& rng) {
    mp.validate();
    grid.validate();
    if (grid.size() < 2 || !(grid.back() > 0.0))
        throw std::invalid_argument("simulate_joint: grid must reach past 0");

    const double kappa = mp.ou.kappa, theta = mp.ou.theta, psi = mp.ou.psi;
    const double r = mp.r, rk = mp.r + kappa;
    const std::size_t n = grid.size();

    PathBundle b;
    b.grid = grid;
    b.X.assign(n, 0.0);
    b.B.assign(n, 0.0);
    b.G.assign(n, 0.0);
    b.xi.assign(n, 0.0);
    b.omega.assign(n, 0.0);
    b.discounted_beta.assign(n, 0.0);
    b.X[0] = mp.ou.x0;

    for (std::size_t j = 1; j < n; ++j) {
        const double s = grid[j - 1];
        const double dt = grid[j] - s;
        // Correlated pair: the dividend shock psi e^{-kappa t_j} ∫ e^{kappa u} dbeta
        // and the discounted increment ∫ e^{-ru} dbeta, both over (s, t_j].
        const double v1 = psi * psi * one_m_exp(2.0 * kappa * dt) / (2.0 * kappa);
        const double v2 = std::exp(-2.0 * r * s) * one_m_exp(2.0 * r * dt) / (2.0 * r);
        const double h = (kappa - r) * dt;
        const double phi = h == 0.0 ? 1.0 : one_m_exp(h) / h;
        const double cov = psi * std::exp(-r * s) * std::exp(-r * dt) * dt * phi;

        const double z1 = rng.normal();
        const double z2 = rng.normal();
        const double z3 = rng.normal();

        double shock = 0.0, dbeta_disc = 0.0;
        if (v1 > 0.0) {
            const double s1 = std::sqrt(v1);
            shock = s1 * z1;
            const double c12 = cov / s1;
            const double resid = std::max(0.0, v2 - c12 * c12);
            dbeta_disc = c12 * z1 + std::sqrt(resid) * z2;
        } else {
            dbeta_disc = std::sqrt(v2) * z2;
        }

        b.X[j] = theta + (b.X[j - 1] - theta) * std::exp(-kappa * dt) + shock;
        b.discounted_beta[j] = b.discounted_beta[j - 1] + dbeta_disc;
        b.B[j] = b.B[j - 1] + std::sqrt(dt) * z3;
    }

    const double tail_sd = std::exp(-r * grid.back()) / std::sqrt(2.0 * r);
    const double g_tail = tail_sd * rng.normal();
    const double db_last = b.discounted_beta[n - 1];
    for (std::size_t j = 0; j < n; ++j) {
        b.G[j] = g_tail + db_last - b.discounted_beta[j];
        const double t = grid[j];
        const double annuity = std::exp(-r * t) * (kappa * theta + r * b.X[j]) / (r * rk);
        b.omega[j] = mp.sigma * psi * t / rk * b.G[j] + b.B[j];
        b.xi[j] = mp.sigma * t * (annuity + psi / rk * b.G[j]) + b.B[j];
    }
    return b;
}

PathBundle simulate_joint(const MarketParams& mp, const TimeGrid& grid, std::uint64_t seed) {
    Rng rng(seed);
    return simulate_joint(mp, grid, rng);
}

double xi_omega_consistency(const PathBundle& bundle, const MarketParams& mp) {
    const double kappa = mp.ou.kappa, theta = mp.ou.theta, psi = mp.ou.psi;
    const double r = mp.r, rk = mp.r + kappa;
    const double c0 = (r * mp.ou.x0 + kappa * theta) / (r * rk);
    double worst = 0.0;
    for (std::size_t j = 0; j < bundle.grid.size(); ++j) {
        const double t = bundle.grid[j];
        // Accumulated discounted dividends in closed form.
        const double acc = c0 + psi / rk * bundle.discounted_beta[j] -
                           std::exp(-r * t) * (kappa * theta + r * bundle.X[j]) / (r * rk);
        const double resid =
            bundle.xi[j] - bundle.omega[j] -
            mp.sigma * t * (c0 + psi / rk * bundle.discounted_beta[j] - acc);
        worst = std::max(worst, std::fabs(resid));
    }
    return worst;
}

void write_path_csv(std::ostream& os, const PathBundle& bundle) {
    os.precision(15);
    os << "t,X,B,G,xi,omega\n";
    for (std::size_t j = 0; j < bundle.grid.size(); ++j)
        os << bundle.grid[j] << ',' << bundle.X[j] << ',' << bundle.B[j] << ',' << bundle.G[j]
           << ',' << bundle.xi[j] << ',' << bundle.omega[j] << '\n';
}

} // namespace cip
