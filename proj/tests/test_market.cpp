#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cip/market.hpp"
#include "cip/stats.hpp"
#include "doctest.h"

using namespace cip;

namespace {

const MarketParams kMp{{0.15, 0.5, 0.15, 0.6}, 0.25, 0.05};

} // namespace

TEST_SUITE("market") {

TEST_CASE("information weight at fixed times") {
    CHECK(std::fabs(discount_bundle(kMp, 0.25).z - 0.07895272311821829) < 1e-12);
    CHECK(std::fabs(discount_bundle(kMp, 1.0).z - 0.2413361948299476) < 1e-12);
    CHECK(std::fabs(discount_bundle(kMp, 2.0).z - 0.3653493679260728) < 1e-12);
}

TEST_CASE("discount bundle identities") {
    const double rk = kMp.r + kMp.ou.kappa;
    double prev_z = -1.0;
    for (int i = 0; i <= 20; ++i) {
        const double t = 0.25 * i;
        const DiscountBundle b = discount_bundle(kMp, t);
        CHECK(b.t == t);
        CHECK(std::fabs(b.P - std::exp(-kMp.r * t)) < 1e-16);
        CHECK(std::fabs(b.p - b.P / kMp.r) < 1e-15);
        CHECK(std::fabs(b.q - b.P / rk) < 1e-15);
        CHECK(b.z >= 0.0);
        CHECK(b.z < 1.0);
        CHECK(b.z > prev_z);    // weight grows while t << 1/(2r)
        prev_z = b.z;
        CHECK(b.D >= 0.0);
        CHECK(b.D < 1.0);

        // V is the no-signal dispersion of the future-dividend aggregate,
        // shrunk by the weight already revealed.
        const double var_a =
            kMp.ou.psi * kMp.ou.psi * std::exp(-2.0 * kMp.r * t) / (2.0 * kMp.r * rk * rk);
        CHECK(std::fabs(b.V - var_a * (1.0 - b.z)) < 1e-15 * b.V);

        // z measured per unit of signal-time.
        CHECK(std::fabs(b.z - kMp.sigma * t * info_gain(kMp, t)) < 1e-15);
    }
    CHECK(discount_bundle(kMp, 0.0).z == 0.0);
    CHECK_THROWS_AS(discount_bundle(kMp, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(info_gain(kMp, -0.5), std::invalid_argument);
}

TEST_CASE("degenerate signal or dividend volatility") {
    MarketParams quiet = kMp;
    quiet.sigma = 0.0;
    const DiscountBundle bq = discount_bundle(quiet, 1.5);
    CHECK(bq.z == 0.0);
    CHECK(bq.D == 0.0);
    CHECK(bq.V > 0.0);
    CHECK(info_gain(quiet, 1.5) == 0.0);

    MarketParams flat = kMp;
    flat.ou.psi = 0.0;
    const DiscountBundle bf = discount_bundle(flat, 1.5);
    CHECK(bf.z == 0.0);
    CHECK(bf.D == 0.0);
    CHECK(bf.V == 0.0);
}

TEST_CASE("general-rate weight reduces to the constant-rate weight") {
    const RateCurve flat = RateCurve::constant(kMp.r);
    RateCurve split;    // same rate on both sides of an arbitrary breakpoint
    split.breakpoints = {0.8};
    split.rates = {kMp.r, kMp.r};
    for (double t : {0.0, 0.3, 1.0, 2.7}) {
        const double z = discount_bundle(kMp, t).z;
        CHECK(std::fabs(weight_z_general(kMp.ou, kMp.sigma, flat, t) - z) < 1e-14);
        CHECK(std::fabs(weight_z_general(kMp.ou, kMp.sigma, split, t) - z) < 1e-14);
    }
    CHECK_THROWS_AS(weight_z_general(kMp.ou, -0.1, flat, 1.0), std::invalid_argument);
}

TEST_CASE("joint sampler is reproducible and consumes a fixed draw budget") {
    const TimeGrid grid = TimeGrid::regular(0.25, 1.0, 0.25);
    const PathBundle a = simulate_joint(kMp, grid, 123);
    const PathBundle b = simulate_joint(kMp, grid, 123);
    CHECK(a.X == b.X);
    CHECK(a.B == b.B);
    CHECK(a.G == b.G);
    CHECK(a.xi == b.xi);
    CHECK(a.omega == b.omega);

    // Three draws per step plus the tail draw, independent of degeneracies.
    for (const MarketParams& mp : {kMp, MarketParams{{0.15, 0.5, 0.0, 0.6}, 0.25, 0.05}}) {
        Rng used(99);
        simulate_joint(mp, grid, used);
        Rng skip(99);
        for (std::size_t i = 0; i < 3 * (grid.size() - 1) + 1; ++i) skip.normal();
        CHECK(used.normal() == skip.normal());
    }
}

TEST_CASE("joint sampler matches the marginal laws") {
    const TimeGrid grid = TimeGrid::regular(0.5, 1.0, 0.5);    // {0, 0.5, 1}
    const std::size_t n = 30000;
    std::vector<double> b1(n), x1(n), g0(n), g1(n), xi1(n), om1(n);
    Rng rng(2024);
    for (std::size_t i = 0; i < n; ++i) {
        const PathBundle p = simulate_joint(kMp, grid, rng);
        b1[i] = p.B[2];
        x1[i] = p.X[2];
        g0[i] = p.G[0];
        g1[i] = p.G[2];
        xi1[i] = p.xi[2];
        om1[i] = p.omega[2];
    }
    const double rk = kMp.r + kMp.ou.kappa;
    CHECK(std::fabs(stats::variance(b1) - 1.0) < 3.0 * stats::variance_se(b1));
    CHECK(std::fabs(stats::variance(x1) - ou_variance(kMp.ou, 1.0)) <
          3.0 * stats::variance_se(x1));
    CHECK(std::fabs(stats::variance(g0) - 1.0 / (2.0 * kMp.r)) < 3.0 * stats::variance_se(g0));
    CHECK(std::fabs(stats::variance(g1) - std::exp(-2.0 * kMp.r) / (2.0 * kMp.r)) <
          3.0 * stats::variance_se(g1));
    // The tail integral after t is independent of everything known by t.
    CHECK(std::fabs(stats::correlation(x1, g1)) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::fabs(stats::correlation(b1, g1)) < 3.0 / std::sqrt(static_cast<double>(n)));

    const double mean_xi = kMp.sigma * std::exp(-kMp.r) *
                           (kMp.ou.kappa * kMp.ou.theta + kMp.r * ou_mean(kMp.ou, 1.0)) /
                           (kMp.r * rk);
    CHECK(std::fabs(stats::mean(xi1) - mean_xi) < 3.0 * stats::mean_se(xi1));
    const double var_xi = kMp.sigma * kMp.sigma * std::exp(-2.0 * kMp.r) *
                              (ou_variance(kMp.ou, 1.0) + kMp.ou.psi * kMp.ou.psi / (2.0 * kMp.r)) /
                              (rk * rk) +
                          1.0;
    CHECK(std::fabs(stats::variance(xi1) - var_xi) < 3.0 * stats::variance_se(xi1));
    const double var_om = 1.0 / (1.0 - discount_bundle(kMp, 1.0).z);
    CHECK(std::fabs(stats::variance(om1) - var_om) < 3.0 * stats::variance_se(om1));
}

TEST_CASE("information identity holds on clean bundles and flags tampering") {
    const TimeGrid grid = TimeGrid::regular(0.25, 1.0, 0.25);
    PathBundle p = simulate_joint(kMp, grid, 7);
    CHECK(xi_omega_consistency(p, kMp) < 1e-9);

    PathBundle bumped = p;
    for (double& x : bumped.X) x += 5e-4;
    CHECK(xi_omega_consistency(bumped, kMp) > 1e-5);

    bumped = p;
    bumped.xi.back() += 5e-4;
    CHECK(xi_omega_consistency(bumped, kMp) > 1e-5);

    bumped = p;
    bumped.omega[2] -= 5e-4;
    CHECK(xi_omega_consistency(bumped, kMp) > 1e-5);
}

TEST_CASE("path csv layout") {
    const TimeGrid grid = TimeGrid::regular(0.5, 1.0, 0.5);
    const PathBundle p = simulate_joint(kMp, grid, 15);
    std::ostringstream os;
    write_path_csv(os, p);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,X,B,G,xi,omega");
    std::size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == grid.size());
}

TEST_CASE("validation") {
    MarketParams bad = kMp;
    bad.r = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = kMp;
    bad.sigma = -0.2;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    TimeGrid origin;
    origin.points = {0.0};
    CHECK_THROWS_AS(simulate_joint(kMp, origin, 1), std::invalid_argument);
}

} // TEST_SUITE
