#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cip/market.hpp"
#include "cip/ou.hpp"

namespace cip {

/// One verified statistic. pass <=> |statistic - expected| <= tolerance.
struct CheckResult {
    std::string name;
    double statistic = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    double se = 0.0;    // 0 for deterministic checks
    bool pass = false;
};

struct VerificationReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::size_t paths = 0;
    std::vector<CheckResult> checks;
    double runtime_seconds = 0.0;

    bool all_passed() const;
};

/// Ensemble controls. The grid fixes the horizon and checkpoint times for the
/// path-law suites (spot_law, martingale, futures, options); the fine-step
/// suites (sde, martingale quadratic variation) derive their own grids from
/// its endpoint, and moments/bridge/projection use fixed internal times.
struct SuiteSettings {
    std::uint64_t seed = 1;
    std::size_t paths = 20000;
    TimeGrid grid{{0.0, 0.25, 0.5, 0.75, 1.0}};
};

/// Runs one named Monte Carlo verification suite. Known names: moments,
/// bridge, projection, spot_law, sde, martingale, futures, options, all.
/// Deterministic for fixed settings regardless of worker count. The
/// projection suite requires sigma > 0 and the sde suite sigma * psi > 0;
/// both throw std::invalid_argument otherwise (as does an unknown name).
VerificationReport run_suite(const std::string& name, const MarketParams& mp,
                             const SuiteSettings& settings);

/// Draw of the detrended discounted-dividend tail A_t, the scaled information
/// noise C_t = B_t / (sigma t), and their sum. A and C come from independent
/// streams, so their sample independence is true by construction.
struct ProjectionSample {
    double A = 0.0;
    double C = 0.0;
    double sum = 0.0;
};

/// Samples (A_t, C_t) from their exact Gaussian laws. Requires t > 0 and
/// sigma > 0.
std::vector<ProjectionSample> projection_samples(const MarketParams& mp, double t,
                                                 std::size_t paths, std::uint64_t seed);

struct ProjectionResult {
    double slope = 0.0;         // least-squares slope of A on A + C
    double slope_se = 0.0;
    double z_expected = 0.0;    // information weight the slope must recover
};

/// The conditional-expectation weight recovered by regression: the slope of A
/// on A + C estimates z_t. Requires t > 0, sigma > 0, paths >= 3.
ProjectionResult projection_check(const MarketParams& mp, double t, std::size_t paths,
                                  std::uint64_t seed);

/// Least-squares coefficients of the discounted future-dividend aggregate on
/// (1, X_t, xi_t), against their closed-form values (the three terms of the
/// discounted spot price). Requires t > 0, sigma * psi > 0, paths >= 4.
struct RegressionPriceResult {
    std::array<double, 3> estimated{};    // intercept, X slope, xi slope
    std::array<double, 3> expected{};
    std::array<double, 3> se{};
};

RegressionPriceResult regression_price_check(const MarketParams& mp, double t,
                                             std::size_t paths, std::uint64_t seed);

/// JSON document {suite, seed, paths, checks:[...], runtime_seconds}.
std::string report_to_json(const VerificationReport& report);
void write_report_json(std::ostream& os, const VerificationReport& report);

} // namespace cip
