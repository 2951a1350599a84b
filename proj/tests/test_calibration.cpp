#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cip/calibration.hpp"
#include "cip/ou.hpp"
#include "cip/pricing.hpp"
#include "cip/rng.hpp"
#include "doctest.h"

using namespace cip;

namespace {

std::vector<double> sample_series(const OuParams& p, double dt, std::size_t steps,
                                  std::uint64_t seed) {
    TimeGrid grid;
    grid.points.reserve(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) grid.points.push_back(dt * static_cast<double>(i));
    Rng rng(seed);
    return ou_sample_path(p, grid, rng);
}

} // namespace

TEST_SUITE("calibration") {

TEST_CASE("vanishing noise pins the reversion parameters") {
    const OuParams truth{0.2, 1.2, 1e-8, 0.5};
    const auto series = sample_series(truth, 0.01, 1000, 7);
    const OuFit fit = ou_fit(series, 0.01);
    CHECK(std::fabs(fit.params.kappa - truth.kappa) < 1e-5);
    CHECK(std::fabs(fit.params.theta - truth.theta) < 1e-4);
    CHECK(fit.params.psi / truth.psi > 0.8);
    CHECK(fit.params.psi / truth.psi < 1.2);
    CHECK(fit.params.x0 == series.front());
}

TEST_CASE("well-specified fit recovers the truth within its standard errors") {
    const OuParams truth{0.2, 1.2, 0.4, 0.5};
    const double dt = 0.01;
    const auto series = sample_series(truth, dt, 10000, 4242);
    const OuFit fit = ou_fit(series, dt);
    CHECK(fit.n_obs == 10000);
    CHECK(std::fabs(fit.params.kappa - truth.kappa) < 3.0 * fit.kappa_se);
    CHECK(std::fabs(fit.params.theta - truth.theta) < 3.0 * fit.theta_se);
    CHECK(std::fabs(fit.params.psi - truth.psi) < 3.0 * fit.psi_se);

    // Reported uncertainties are in the right regime for T = 100.
    CHECK(fit.kappa_se > 0.01);
    CHECK(fit.kappa_se < 0.2);
    CHECK(fit.theta_se > 0.01);
    CHECK(fit.theta_se < 1.0);
    CHECK(fit.psi_se > 1e-4);
    CHECK(fit.psi_se < 0.05);

    // The reported likelihood is the Gaussian profile value at the estimate.
    const double a = std::exp(-fit.params.kappa * dt);
    const double s2 = fit.params.psi * fit.params.psi * dt * (1.0 - a * a) /
                      (-2.0 * std::log(a));
    const double nd = static_cast<double>(fit.n_obs);
    const double ll = -0.5 * nd * (std::log(2.0 * std::numbers::pi * s2) + 1.0);
    CHECK(std::fabs(fit.log_likelihood - ll) < 1e-6 * std::fabs(ll));
}

TEST_CASE("uncertainty shrinks with the sample") {
    const OuParams truth{0.2, 1.2, 0.4, 0.5};
    const auto series = sample_series(truth, 0.01, 10000, 9);
    const std::vector<double> head(series.begin(), series.begin() + 2000);
    const OuFit full = ou_fit(series, 0.01);
    const OuFit part = ou_fit(head, 0.01);
    CHECK(part.kappa_se > full.kappa_se);
    CHECK(part.theta_se > full.theta_se);
    CHECK(part.psi_se > full.psi_se);
}

TEST_CASE("rejects series the model cannot have produced") {
    CHECK_THROWS_AS(ou_fit({1.0, 1.1, 1.05}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ou_fit({1.0, 1.1}, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(ou_fit({1.0, 1.0, 1.0, 1.0}, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(ou_fit({1.0, std::nan(""), 1.05}, 0.01), std::invalid_argument);
    // Doubling every step: AR(1) coefficient 2.
    CHECK_THROWS_AS(ou_fit({1.0, 2.0, 4.0, 8.0, 16.0}, 0.01), std::invalid_argument);
    // Sign-flipping: AR(1) coefficient -1.
    CHECK_THROWS_AS(ou_fit({1.0, -1.0, 1.0, -1.0, 1.0}, 0.01), std::invalid_argument);
    // Exact affine recursion: zero residual variance.
    std::vector<double> det{1.0};
    for (int i = 0; i < 6; ++i) det.push_back(0.5 * det.back() + 0.1);
    CHECK_THROWS_AS(ou_fit(det, 0.01), std::invalid_argument);
}

TEST_CASE("initial state implied by two price quotes") {
    const double r = 0.025, kappa = 0.05;
    const ImpliedInitials flat = implied_initials(60.0, 60.0, r, kappa);
    CHECK(std::fabs(flat.x0 - flat.theta) < 1e-12);
    CHECK(std::fabs(flat.theta - r * 60.0) < 1e-14);

    const ImpliedInitials ref = implied_initials(62.78, 60.0, r, kappa);
    CHECK(std::fabs(ref.theta - 1.5) < 1e-12);
    CHECK(std::fabs(ref.x0 - 1.7085) < 1e-12);

    // Round trip through the pricer.
    const MarketParams mp{{kappa, ref.theta, 0.4, ref.x0}, 0.1, r};
    CHECK(std::fabs(spot_price(mp, 0.0, ref.x0, 0.0).S - 62.78) < 1e-10);

    CHECK_THROWS_AS(implied_initials(62.78, 60.0, 0.0, kappa), std::invalid_argument);
    CHECK_THROWS_AS(implied_initials(62.78, 60.0, r, 0.0), std::invalid_argument);
}

} // TEST_SUITE
