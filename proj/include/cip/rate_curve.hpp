#pragma once

#include <vector>

namespace cip {

/// Deterministic piecewise-constant short-rate curve. Rates hold on
/// [0, b_0), ..., [b_{n-1}, inf). The last (unbounded) rate must be positive
/// so the perpetual annuity integrals converge; finite segments may carry any
/// finite rate.
struct RateCurve {
    std::vector<double> breakpoints;    // strictly increasing, first > 0
    std::vector<double> rates;          // breakpoints.size() + 1 entries

    void validate() const;
    std::size_t segment(double t) const;
    bool is_constant() const { return breakpoints.empty(); }

    static RateCurve constant(double r);

    /// ∫_0^t r_s ds.
    double integral(double t) const;

    /// Discount factor e^{-∫_0^t r}.
    double discount(double t) const;

    /// Perpetual annuity ∫_t^inf P_u du.
    double annuity(double t) const;

    /// Damped annuity ∫_t^inf P_u e^{-kappa (u-t)} du, kappa > 0.
    double damped_annuity(double t, double kappa) const;

    /// ∫_t^inf (damped_annuity(s, kappa))^2 ds. Drives the information weight
    /// under a general deterministic rate.
    double damped_annuity_sq_tail(double t, double kappa) const;
};

} // namespace cip
