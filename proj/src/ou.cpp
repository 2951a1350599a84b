#include "cip/ou.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cip/numeric.hpp"

namespace cip {

void OuParams::validate() const {
    if (!(kappa > 0.0)) throw std::invalid_argument("OuParams: kappa must be > 0");
    if (!(psi >= 0.0)) throw std::invalid_argument("OuParams: psi must be >= 0");
    if (!std::isfinite(theta) || !std::isfinite(x0))
        throw std::invalid_argument("OuParams: theta and x0 must be finite");
}

void TimeGrid::validate() const {
    if (points.empty()) throw std::invalid_argument("TimeGrid: empty");
    if (points.front() != 0.0) throw std::invalid_argument("TimeGrid: must start at 0");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i] > points[i - 1]))
            throw std::invalid_argument("TimeGrid: points must be strictly increasing");
    if (!std::isfinite(points.back())) throw std::invalid_argument("TimeGrid: non-finite point");
}

TimeGrid TimeGrid::regular(double start, double end, double step) {
    if (!(step > 0.0) || !(end > start) || !(start >= 0.0))
        throw std::invalid_argument("TimeGrid::regular: need 0 <= start < end, step > 0");
    TimeGrid g;
    g.points.push_back(0.0);
    const auto n = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = start + static_cast<double>(i) * step;
        if (t > g.points.back()) g.points.push_back(t);
    }
    // Land exactly on `end` when the step count rounds short of it.
    if (end > g.points.back() + 0.5 * step) g.points.push_back(end);
    g.validate();
    return g;
}

void Schedule::validate() const {
    const std::size_t n = breakpoints.size() + 1;
    if (kappa_vals.size() != n || theta_vals.size() != n || psi_vals.size() != n)
        throw std::invalid_argument("Schedule: value arrays must have breakpoints+1 entries");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (i == 0 && !(breakpoints[0] > 0.0))
            throw std::invalid_argument("Schedule: first breakpoint must be > 0");
        if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("Schedule: breakpoints must be strictly increasing");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(kappa_vals[i] > 0.0))
            throw std::invalid_argument("Schedule: all kappa values must be > 0");
        if (!(psi_vals[i] >= 0.0))
            throw std::invalid_argument("Schedule: all psi values must be >= 0");
        if (!std::isfinite(theta_vals[i]))
            throw std::invalid_argument("Schedule: theta values must be finite");
    }
}

std::size_t Schedule::segment(double t) const {
    return static_cast<std::size_t>(
        std::upper_bound(breakpoints.begin(), breakpoints.end(), t) - breakpoints.begin());
}

Schedule Schedule::constant(double kappa, double theta, double psi) {
    Schedule s;
    s.kappa_vals = {kappa};
    s.theta_vals = {theta};
    s.psi_vals = {psi};
    s.validate();
    return s;
}

double ou_mean(const OuParams& p, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("ou_mean: t must be >= 0");
    const double d = std::exp(-p.kappa * t);
    return d * p.x0 + p.theta * (1.0 - d);
}

double ou_cov(const OuParams& p, double s, double t) {
    if (!(s >= 0.0) || !(t >= 0.0)) throw std::invalid_argument("ou_cov: times must be >= 0");
    if (s > t) std::swap(s, t);
    // (psi^2/2k) e^{-kt}(e^{ks}-e^{-ks}) = (psi^2/2k) e^{-k(t-s)}(1-e^{-2ks})
    return p.psi * p.psi / (2.0 * p.kappa) * std::exp(-p.kappa * (t - s)) *
           one_m_exp(2.0 * p.kappa * s);
}

double ou_variance(const OuParams& p, double t) { return ou_cov(p, t, t); }

double ou_transition_sample(const OuParams& p, double x, double dt, double draw) {
    if (!(dt > 0.0)) throw std::invalid_argument("ou_transition_sample: dt must be > 0");
    const double d = std::exp(-p.kappa * dt);
    const double sd = p.psi * std::sqrt(one_m_exp(2.0 * p.kappa * dt) / (2.0 * p.kappa));
    return p.theta + (x - p.theta) * d + sd * draw;
}

std::vector<double> ou_sample_path(const OuParams& p, const TimeGrid& grid, Rng& rng) {
    p.validate();
    grid.validate();
    std::vector<double> x(grid.size());
    x[0] = p.x0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        x[i] = ou_transition_sample(p, x[i - 1], grid[i] - grid[i - 1], rng.normal());
    return x;
}

namespace {

// sinh(kappa (T-t)) / sinh(kappa T), in overflow-free form.
double pin_weight_far(const OuParams& p, double t, double T) {
    return std::exp(-p.kappa * t) * one_m_exp(2.0 * p.kappa * (T - t)) /
           one_m_exp(2.0 * p.kappa * T);
}

// sinh(kappa t) / sinh(kappa T).
double pin_weight_near(const OuParams& p, double t, double T) {
    return std::exp(-p.kappa * (T - t)) * one_m_exp(2.0 * p.kappa * t) /
           one_m_exp(2.0 * p.kappa * T);
}

} // namespace

BridgeMoments bridge_moments(const OuParams& p, double t, double T) {
    p.validate();
    if (!(T > 0.0)) throw std::invalid_argument("bridge_moments: T must be > 0");
    if (!(t >= 0.0) || !(t <= T))
        throw std::invalid_argument("bridge_moments: need 0 <= t <= T");
    const double w_far = pin_weight_far(p, t, T);
    const double w_near = pin_weight_near(p, t, T);
    BridgeMoments m;
    m.mean = w_far * p.x0 + (1.0 - w_far - w_near) * p.theta;
    m.variance = p.psi * p.psi / (2.0 * p.kappa) * one_m_exp(2.0 * p.kappa * t) *
                 one_m_exp(2.0 * p.kappa * (T - t)) / one_m_exp(2.0 * p.kappa * T);
    return m;
}

std::vector<BridgeState> bridge_sample(const OuParams& p, const TimeGrid& grid, Rng& rng) {
    grid.validate();
    if (!(grid.back() > 0.0)) throw std::invalid_argument("bridge_sample: grid must end past 0");
    const double T = grid.back();
    const std::vector<double> x = ou_sample_path(p, grid, rng);
    std::vector<BridgeState> b(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        b[i] = BridgeState{grid[i], T, x[i] - pin_weight_near(p, grid[i], T) * x.back()};
    return b;
}

double inhom_factor(const Schedule& s, double t) {
    s.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("inhom_factor: t must be >= 0");
    double f = 0.0;
    double a = 0.0;
    for (std::size_t i = 0; i < s.breakpoints.size() && a < t; ++i) {
        const double b = std::min(s.breakpoints[i], t);
        f += s.kappa_vals[i] * (b - a);
        a = b;
    }
    if (t > a) f += s.kappa_vals[s.breakpoints.size()] * (t - a);
    return f;
}

namespace {

// Affine-Gaussian map X -> d + c X + N(0, v) for one constant-parameter
// sub-interval of length dt.
struct Transition {
    double c = 1.0, d = 0.0, v = 0.0;

    void compose(double kappa, double theta, double psi, double dt) {
        const double e = std::exp(-kappa * dt);
        const double vd = psi * psi * one_m_exp(2.0 * kappa * dt) / (2.0 * kappa);
        c *= e;
        d = theta * (1.0 - e) + e * d;
        v = e * e * v + vd;
    }
};

} // namespace

std::vector<double> inhom_sample_path(const Schedule& s, double x0, const TimeGrid& grid,
                                      Rng& rng) {
    s.validate();
    grid.validate();
    std::vector<double> x(grid.size());
    x[0] = x0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        Transition tr;
        double a = grid[i - 1];
        std::size_t seg = s.segment(a);
        while (seg < s.breakpoints.size() && s.breakpoints[seg] < grid[i]) {
            tr.compose(s.kappa_vals[seg], s.theta_vals[seg], s.psi_vals[seg],
                       s.breakpoints[seg] - a);
            a = s.breakpoints[seg];
            ++seg;
        }
        tr.compose(s.kappa_vals[seg], s.theta_vals[seg], s.psi_vals[seg], grid[i] - a);
        x[i] = tr.d + tr.c * x[i - 1] + std::sqrt(tr.v) * rng.normal();
    }
    return x;
}

} // namespace cip
