#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cip/market.hpp"
#include "cip/pricing.hpp"
#include "doctest.h"

using namespace cip;

namespace {

const MarketParams kMp{{0.15, 0.5, 0.15, 0.6}, 0.25, 0.05};
const MarketParams kCalm{{0.05, 1.5, 0.4, 1.7085}, 0.1, 0.025};

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (b <= a) return 0.0;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Quadrature with panels split on both the schedule and curve breakpoints.
double joint_quad(const Schedule& sch, const RateCurve& c,
                  const std::function<double(double)>& f, double t, double cut, int n) {
    std::vector<double> knots{t};
    for (double b : sch.breakpoints)
        if (b > t && b < cut) knots.push_back(b);
    for (double b : c.breakpoints)
        if (b > t && b < cut) knots.push_back(b);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    knots.push_back(cut);
    double acc = 0.0;
    for (std::size_t i = 1; i < knots.size(); ++i)
        acc += simpson(f, knots[i - 1], knots[i], n);
    return acc;
}

// Independent evaluation of the schedule pricer's building blocks. Everything
// past `cut` is constant-parameter, where elementary tails apply.
struct InhomOracle {
    const Schedule& sch;
    const RateCurve& curve;
    double cut;

    double growth(double a, double b) const {    // exp(-∫_a^b kappa)
        return std::exp(-(inhom_factor(sch, b) - inhom_factor(sch, a)));
    }
    double W(double t) const {
        const double rho = curve.rates.back() + sch.kappa_vals.back();
        const double tail = curve.discount(cut) * growth(t, cut) / rho;
        return joint_quad(
                   sch, curve, [&](double u) { return curve.discount(u) * growth(t, u); }, t,
                   cut, 400) +
               tail;
    }
    // The parameter factor jumps at breakpoints, so it is frozen per panel
    // (constant there anyway); Simpson then only sees the smooth part.
    double jumpy_quad(const std::function<double(double)>& smooth,
                      const std::function<double(double)>& level, double t) const {
        std::vector<double> knots{t};
        for (double b : sch.breakpoints)
            if (b > t && b < cut) knots.push_back(b);
        for (double b : curve.breakpoints)
            if (b > t && b < cut) knots.push_back(b);
        std::sort(knots.begin(), knots.end());
        knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
        knots.push_back(cut);
        double acc = 0.0;
        for (std::size_t i = 1; i < knots.size(); ++i)
            acc += level(0.5 * (knots[i - 1] + knots[i])) *
                   simpson(smooth, knots[i - 1], knots[i], 400);
        return acc;
    }
    double divint(double t) const {
        const double kt = sch.kappa_vals.back() * sch.theta_vals.back();
        const double rho = curve.rates.back() + sch.kappa_vals.back();
        const double tail = kt * curve.discount(cut) / (curve.rates.back() * rho);
        return jumpy_quad([&](double u) { return W(u); },
                          [&](double u) {
                              return sch.kappa_vals[sch.segment(u)] *
                                     sch.theta_vals[sch.segment(u)];
                          },
                          t) +
               tail;
    }
    double J(double t) const {
        const double pn = sch.psi_vals.back();
        const double rho = curve.rates.back() + sch.kappa_vals.back();
        const double Pc = curve.discount(cut);
        const double tail = pn * pn * Pc * Pc / (2.0 * curve.rates.back() * rho * rho);
        return jumpy_quad(
                   [&](double u) {
                       const double w = W(u);
                       return w * w;
                   },
                   [&](double u) {
                       const double p = sch.psi_vals[sch.segment(u)];
                       return p * p;
                   },
                   t) +
               tail;
    }
};

} // namespace

TEST_SUITE("pricing") {

TEST_CASE("initial prices at the reference parameter sets") {
    CHECK(std::fabs(spot_price(kCalm, 0.0, kCalm.ou.x0, 0.0).S - 62.78) < 1e-10);
    CHECK(std::fabs(spot_price(kMp, 0.0, kMp.ou.x0, 0.0).S - 10.5) < 1e-12);
}

TEST_CASE("price decomposition and slopes") {
    const double t = 1.3, x = 0.9;
    for (double xi : {-0.4, 0.0, 0.7}) {
        const SpotQuote q = spot_price(kMp, t, x, xi);
        CHECK(q.t == t);
        CHECK(q.S == q.annuity_term + q.info_term);
    }
    // Linear in xi with slope info_gain / P.
    const double slope =
        (spot_price(kMp, t, x, 1.0).S - spot_price(kMp, t, x, 0.0).S) / 1.0;
    CHECK(std::fabs(slope - info_gain(kMp, t) * std::exp(kMp.r * t)) < 1e-12);
    // Linear in x with slope (1-z) q / P.
    const DiscountBundle d = discount_bundle(kMp, t);
    const double xslope = spot_price(kMp, t, 1.0, 0.0).S - spot_price(kMp, t, 0.0, 0.0).S;
    CHECK(std::fabs(xslope - (1.0 - d.z) / (kMp.r + kMp.ou.kappa)) < 1e-12);

    // No-signal price with the dividend at its reversion level is the perpetuity.
    MarketParams quiet = kMp;
    quiet.sigma = 0.0;
    CHECK(std::fabs(spot_price(quiet, 2.4, quiet.ou.theta, 0.0).S - quiet.ou.theta / quiet.r) <
          1e-12);

    CHECK_THROWS_AS(spot_price(kMp, 0.0, 0.6, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(spot_price(kMp, -1.0, 0.6, 0.0), std::invalid_argument);
}

TEST_CASE("general-rate pricer reduces to the constant-rate pricer on a flat curve") {
    const RateCurve flat = RateCurve::constant(kMp.r);
    RateCurve split;
    split.breakpoints = {0.9};
    split.rates = {kMp.r, kMp.r};
    for (double t : {0.0, 0.4, 1.3, 2.6}) {
        const double xi = t == 0.0 ? 0.0 : 0.7;
        const double want = spot_price(kMp, t, 0.9, xi).S;
        CHECK(std::fabs(spot_price_general(kMp.ou, kMp.sigma, flat, t, 0.9, xi).S - want) <
              1e-12 * std::fabs(want));
        CHECK(std::fabs(spot_price_general(kMp.ou, kMp.sigma, split, t, 0.9, xi).S - want) <
              1e-12 * std::fabs(want));
    }
}

TEST_CASE("schedule pricer reduces to the constant-rate pricer when flat") {
    const Schedule sch = Schedule::constant(kMp.ou.kappa, kMp.ou.theta, kMp.ou.psi);
    const RateCurve flat = RateCurve::constant(kMp.r);
    for (double t : {0.0, 0.4, 1.3, 2.6}) {
        const double xi = t == 0.0 ? 0.0 : 0.7;
        const SpotQuote want = spot_price(kMp, t, 0.9, xi);
        const SpotQuote got = spot_price_inhom(sch, flat, kMp.sigma, t, 0.9, xi);
        CHECK(std::fabs(got.S - want.S) < 1e-10 * std::fabs(want.S));
        CHECK(std::fabs(got.annuity_term - want.annuity_term) < 1e-10 * want.annuity_term);

        const ScheduleBundle b = schedule_bundle(sch, flat, kMp.sigma, t);
        const DiscountBundle d = discount_bundle(kMp, t);
        CHECK(std::fabs(b.z - d.z) < 1e-12);
        CHECK(std::fabs(b.f - kMp.ou.kappa * t) < 1e-14);
        CHECK(std::fabs(b.delta - d.q * std::exp(-kMp.ou.kappa * t)) < 1e-14);
    }
}

TEST_CASE("schedule pricer matches nested quadrature on a two-break model") {
    Schedule sch;
    sch.breakpoints = {0.8, 1.6};
    sch.kappa_vals = {0.15, 0.25, 0.2};
    sch.theta_vals = {0.5, 0.8, 0.6};
    sch.psi_vals = {0.15, 0.2, 0.1};
    RateCurve curve;
    curve.breakpoints = {1.2};
    curve.rates = {0.05, 0.04};
    const double sigma = 0.25, x = 0.7;
    // The tail formulas are exact anywhere past the last breakpoint, so a
    // short quadrature range keeps the Simpson error near machine level.
    const InhomOracle oracle{sch, curve, 3.0};

    for (double t : {0.0, 0.5, 1.0, 2.0}) {
        const double xi = t == 0.0 ? 0.0 : 0.3;
        const double W = oracle.W(t);
        const double J = oracle.J(t);
        const double divint = oracle.divint(t);
        const double P = curve.discount(t);
        const double a = sigma * sigma * t * J;
        const double S_oracle =
            ((1.0 - a / (1.0 + a)) * (divint + W * x) + sigma * J / (1.0 + a) * xi) / P;

        const SpotQuote got = spot_price_inhom(sch, curve, sigma, t, x, xi);
        CHECK(std::fabs(got.S - S_oracle) < 1e-6 * std::fabs(S_oracle));

        const ScheduleBundle b = schedule_bundle(sch, curve, sigma, t);
        CHECK(std::fabs(b.delta - std::exp(-inhom_factor(sch, t)) * W) < 1e-7);
        CHECK(std::fabs(b.z - a / (1.0 + a)) < 1e-7);
        CHECK(std::fabs(b.f - inhom_factor(sch, t)) < 1e-14);
    }
}

TEST_CASE("schedule pricer rejects a segment rate cancelling kappa") {
    Schedule sch;
    sch.breakpoints = {1.0};
    sch.kappa_vals = {0.02, 0.2};
    sch.theta_vals = {0.5, 0.5};
    sch.psi_vals = {0.1, 0.1};
    RateCurve curve;
    curve.breakpoints = {1.0};
    curve.rates = {-0.02, 0.05};
    CHECK_THROWS_AS(spot_price_inhom(sch, curve, 0.25, 0.0, 0.6, 0.0), std::invalid_argument);
}

TEST_CASE("path pricing is elementwise and the csv layout is stable") {
    const TimeGrid grid = TimeGrid::regular(0.25, 1.0, 0.25);
    const PathBundle p = simulate_joint(kMp, grid, 31);
    const auto quotes = spot_path(p, kMp);
    REQUIRE(quotes.size() == grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const SpotQuote q = spot_price(kMp, grid[j], p.X[j], p.xi[j]);
        CHECK(quotes[j].S == q.S);
        CHECK(quotes[j].t == grid[j]);
    }
    std::ostringstream os;
    write_spot_csv(os, quotes);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,S,annuity_term,info_term");
}

} // TEST_SUITE
