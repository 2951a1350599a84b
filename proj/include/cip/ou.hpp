#pragma once

#include <cstddef>
#include <vector>

#include "cip/rng.hpp"

namespace cip {

/// Mean-reverting dividend process parameters.
struct OuParams {
    double kappa = 0.0;    // reversion rate, > 0
    double theta = 0.0;    // reversion level
    double psi = 0.0;      // volatility, >= 0
    double x0 = 0.0;       // initial level

    void validate() const;    // throws std::invalid_argument
};

/// Strictly increasing times; first point must be 0. A single-point grid {0}
/// is allowed for degenerate path queries.
struct TimeGrid {
    std::vector<double> points;

    void validate() const;
    double front() const { return points.front(); }
    double back() const { return points.back(); }
    std::size_t size() const { return points.size(); }
    double operator[](std::size_t i) const { return points[i]; }

    /// {0, start, start+step, ...} up to end (end included when it lands on a
    /// step boundary); start = 0 collapses the leading point.
    static TimeGrid regular(double start, double end, double step);
};

/// Piecewise-constant reversion/level/volatility schedule. Values hold on
/// [0, b_0), [b_0, b_1), ..., [b_{n-1}, inf).
struct Schedule {
    std::vector<double> breakpoints;    // strictly increasing, first > 0
    std::vector<double> kappa_vals;     // breakpoints.size() + 1 entries
    std::vector<double> theta_vals;
    std::vector<double> psi_vals;

    void validate() const;
    std::size_t segment(double t) const;    // index of the interval containing t

    static Schedule constant(double kappa, double theta, double psi);
};

/// Path value of the process pinned to 0 at time T.
struct BridgeState {
    double t = 0.0;
    double T = 0.0;
    double value = 0.0;
};

struct BridgeMoments {
    double mean = 0.0;
    double variance = 0.0;
};

double ou_mean(const OuParams& p, double t);

/// Cov[X_s, X_t]; arguments may be given in either order.
double ou_cov(const OuParams& p, double s, double t);

double ou_variance(const OuParams& p, double t);

/// Exact conditional draw of X_{t+dt} given X_t = x; `draw` is standard normal.
double ou_transition_sample(const OuParams& p, double x, double dt, double draw);

/// Exact discrete-time path on the grid (chained conditional transitions, no
/// discretization bias). One draw per step.
std::vector<double> ou_sample_path(const OuParams& p, const TimeGrid& grid, Rng& rng);

/// Moments of the bridge value at t for a pin at T. Evaluated in forms that
/// stay finite for kappa*T up to several hundred and accurate for kappa*T << 1.
BridgeMoments bridge_moments(const OuParams& p, double t, double T);

/// Sample a full path on the grid, pin the terminal value, and return the
/// bridge component at every grid point. grid.back() is the pin time.
std::vector<BridgeState> bridge_sample(const OuParams& p, const TimeGrid& grid, Rng& rng);

/// Integral of the reversion-rate schedule over [0, t].
double inhom_factor(const Schedule& s, double t);

/// Exact path of the time-varying process: per grid step the sub-interval
/// transitions between schedule breakpoints are composed into a single
/// Gaussian, so one draw is consumed per step and a constant schedule yields
/// the same values as ou_sample_path under the same draws.
std::vector<double> inhom_sample_path(const Schedule& s, double x0, const TimeGrid& grid,
                                      Rng& rng);

} // namespace cip
