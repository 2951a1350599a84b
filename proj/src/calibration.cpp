#include "cip/calibration.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cip {

// Exact discretisation at spacing dt: X_{i+1} = theta (1 - a) + a X_i + eps_i,
// a = e^{-kappa dt}, Var(eps) = psi^2 (1 - a^2) / (2 kappa).  The Gaussian MLE
// is least squares of X_{i+1} on X_i; the continuous-time parameters and their
// standard errors follow by the delta method.
OuFit ou_fit(const std::vector<double>& series, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("ou_fit: dt must be positive");
    if (series.size() < 3) throw std::invalid_argument("ou_fit: need at least 3 observations");
    for (double v : series)
        if (!std::isfinite(v)) throw std::invalid_argument("ou_fit: non-finite observation");

    const std::size_t n = series.size() - 1;  // transitions
    const double nd = static_cast<double>(n);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += series[i];
        my += series[i + 1];
    }
    mx /= nd;
    my /= nd;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (series[i] - mx) * (series[i] - mx);
        sxy += (series[i] - mx) * (series[i + 1] - my);
        syy += (series[i + 1] - my) * (series[i + 1] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ou_fit: constant series");

    const double a = sxy / sxx;             // AR(1) coefficient
    const double b = my - a * mx;           // AR(1) intercept
    if (!(a > 0.0 && a < 1.0))
        throw std::invalid_argument("ou_fit: AR(1) coefficient outside (0, 1); not mean-reverting at this spacing");

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = series[i + 1] - b - a * series[i];
        rss += e * e;
    }
    const double s2 = rss / nd;             // MLE of the transition variance
    // Residuals at rounding level mean a deterministic recursion: the Gaussian
    // likelihood is unbounded and no standard errors exist.
    if (rss <= 1e-24 * syy)
        throw std::invalid_argument("ou_fit: series is (numerically) deterministic");

    const double kappa = -std::log(a) / dt;
    const double theta = b / (1.0 - a);
    const double c = -2.0 * std::log(a) / (dt * (1.0 - a * a));  // psi^2 = c * s2
    const double psi2 = c * s2;
    const double psi = std::sqrt(psi2);

    // OLS sampling (co)variances with the MLE error variance.
    const double var_a = s2 / sxx;
    const double var_b = s2 * (1.0 / nd + mx * mx / sxx);
    const double cov_ab = -s2 * mx / sxx;

    const double kappa_var = var_a / (a * dt * a * dt);
    const double theta_var =
        (var_b + 2.0 * theta * cov_ab + theta * theta * var_a) / ((1.0 - a) * (1.0 - a));
    const double c_prime =
        (-2.0 * (1.0 - a * a) / a - 4.0 * a * std::log(a)) / (dt * (1.0 - a * a) * (1.0 - a * a));
    const double var_s2 = 2.0 * s2 * s2 / nd;
    const double psi2_var = c * c * var_s2 + s2 * c_prime * s2 * c_prime * var_a;

    OuFit fit;
    fit.params.kappa = kappa;
    fit.params.theta = theta;
    fit.params.psi = psi;
    fit.params.x0 = series.front();
    fit.kappa_se = std::sqrt(kappa_var);
    fit.theta_se = std::sqrt(theta_var);
    fit.psi_se = std::sqrt(psi2_var) / (2.0 * psi);
    fit.log_likelihood = -0.5 * nd * (std::log(2.0 * std::numbers::pi * s2) + 1.0);
    fit.n_obs = n;
    return fit;
}

ImpliedInitials implied_initials(double spot_0, double spot_inf, double r, double kappa) {
    if (!(r > 0.0)) throw std::invalid_argument("implied_initials: r must be positive");
    if (!(kappa > 0.0)) throw std::invalid_argument("implied_initials: kappa must be positive");
    ImpliedInitials out;
    out.theta = r * spot_inf;
    out.x0 = ((r + kappa) * r * spot_0 - kappa * out.theta) / r;
    return out;
}

}  // namespace cip
