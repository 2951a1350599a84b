#include "cip/rate_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cip/numeric.hpp"

namespace cip {

void RateCurve::validate() const {
    if (rates.size() != breakpoints.size() + 1)
        throw std::invalid_argument("RateCurve: rates must have breakpoints+1 entries");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (i == 0 && !(breakpoints[0] > 0.0))
            throw std::invalid_argument("RateCurve: first breakpoint must be > 0");
        if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("RateCurve: breakpoints must be strictly increasing");
    }
    for (double r : rates)
        if (!std::isfinite(r)) throw std::invalid_argument("RateCurve: non-finite rate");
    if (!(rates.back() > 0.0))
        throw std::invalid_argument("RateCurve: unbounded segment rate must be > 0");
}

std::size_t RateCurve::segment(double t) const {
    return static_cast<std::size_t>(
        std::upper_bound(breakpoints.begin(), breakpoints.end(), t) - breakpoints.begin());
}

RateCurve RateCurve::constant(double r) {
    RateCurve c;
    c.rates = {r};
    c.validate();
    return c;
}

double RateCurve::integral(double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("RateCurve::integral: t must be >= 0");
    double acc = 0.0;
    double a = 0.0;
    for (std::size_t i = 0; i < breakpoints.size() && a < t; ++i) {
        const double b = std::min(breakpoints[i], t);
        acc += rates[i] * (b - a);
        a = b;
    }
    if (t > a) acc += rates.back() * (t - a);
    return acc;
}

double RateCurve::discount(double t) const { return std::exp(-integral(t)); }

double RateCurve::annuity(double t) const {
    const std::size_t n = breakpoints.size();
    std::size_t i = segment(t);
    double acc = 0.0;
    double a = t;
    double P = discount(t);
    while (i < n) {
        const double b = breakpoints[i];
        acc += P * exp_integral(-rates[i], b - a);
        P *= std::exp(-rates[i] * (b - a));
        a = b;
        ++i;
    }
    return acc + P / rates.back();
}

namespace {

// Damped-annuity values at every segment boundary from `from` upward,
// computed by backward recursion off the closed-form tail. boundary_q[j]
// corresponds to breakpoints[j].
std::vector<double> boundary_damped(const RateCurve& c, double kappa, std::size_t from) {
    const std::size_t n = c.breakpoints.size();
    std::vector<double> q(n);
    if (from >= n) return q;
    double P = c.discount(c.breakpoints[n - 1]);
    q[n - 1] = P / (c.rates[n] + kappa);
    for (std::size_t j = n - 1; j > from; --j) {
        // [breakpoints[j-1], breakpoints[j]) carries rate index j.
        const double delta = c.breakpoints[j] - c.breakpoints[j - 1];
        P *= std::exp(c.rates[j] * delta);    // discount at the earlier boundary
        q[j - 1] = P * exp_integral(-(c.rates[j] + kappa), delta) +
                   std::exp(-kappa * delta) * q[j];
    }
    return q;
}

void require_nondegenerate(const RateCurve& c, double kappa) {
    for (double r : c.rates)
        if (std::fabs(r + kappa) < 1e-12)
            throw std::invalid_argument("RateCurve: segment rate equal to -kappa unsupported");
}

} // namespace

double RateCurve::damped_annuity(double t, double kappa) const {
    if (!(t >= 0.0) || !(kappa > 0.0))
        throw std::invalid_argument("damped_annuity: need t >= 0, kappa > 0");
    const std::size_t n = breakpoints.size();
    const std::size_t i = segment(t);
    const double P = discount(t);
    if (i == n) return P / (rates.back() + kappa);
    const std::vector<double> qb = boundary_damped(*this, kappa, i);
    const double delta = breakpoints[i] - t;
    return P * exp_integral(-(rates[i] + kappa), delta) + std::exp(-kappa * delta) * qb[i];
}

double RateCurve::damped_annuity_sq_tail(double t, double kappa) const {
    if (!(t >= 0.0) || !(kappa > 0.0))
        throw std::invalid_argument("damped_annuity_sq_tail: need t >= 0, kappa > 0");
    require_nondegenerate(*this, kappa);
    const std::size_t n = breakpoints.size();
    std::size_t i = segment(t);
    if (i == n) {
        const double P = discount(t);
        const double rk = rates.back() + kappa;
        return P * P / (2.0 * rates.back() * rk * rk);
    }
    const std::vector<double> qb = boundary_damped(*this, kappa, i);
    double acc = 0.0;
    double a = t;
    while (i < n) {
        const double b = breakpoints[i];
        const double delta = b - a;
        const double Pb = discount(b);
        // On [a,b): q_s = alpha e^{r_i (b-s)} + beta e^{-kappa (b-s)}.
        const double alpha = Pb / (rates[i] + kappa);
        const double beta = qb[i] - alpha;
        acc += alpha * alpha * exp_integral(2.0 * rates[i], delta) +
               2.0 * alpha * beta * exp_integral(rates[i] - kappa, delta) +
               beta * beta * exp_integral(-2.0 * kappa, delta);
        a = b;
        ++i;
    }
    const double Pn = discount(a);
    const double rk = rates.back() + kappa;
    return acc + Pn * Pn / (2.0 * rates.back() * rk * rk);
}

} // namespace cip
