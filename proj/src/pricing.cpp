#include "cip/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cip/numeric.hpp"

namespace cip {

namespace {

void check_time_and_info(double t, double xi) {
    if (!(t >= 0.0)) throw std::invalid_argument("spot price: t must be >= 0");
    if (t == 0.0 && xi != 0.0)
        throw std::invalid_argument("spot price: information value must be 0 at t = 0");
}

// Piecewise state for the schedule/curve integrals. All quantities are kept in
// the e^{f}-scaled form W_t = e^{f_t} delta_t, which stays O(P_t) where delta
// and e^{f} separately under/overflow.
struct InhomParts {
    double f = 0.0;
    double W = 0.0;         // e^{f_t} delta_t
    double divint = 0.0;    // ∫_t^inf e^{f_s} kappa_s theta_s delta_s ds
    double J = 0.0;         // ∫_t^inf e^{2 f_s} psi_s^2 delta_s^2 ds
};

InhomParts inhom_parts(const Schedule& s, const RateCurve& curve, double t) {
    s.validate();
    curve.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("schedule pricing: t must be >= 0");

    // Merged piece boundaries after t; parameters are constant on each piece.
    std::vector<double> bounds;
    for (double b : s.breakpoints)
        if (b > t) bounds.push_back(b);
    for (double b : curve.breakpoints)
        if (b > t) bounds.push_back(b);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

    const double tail_start = bounds.empty() ? t : bounds.back();
    const double kap_n = s.kappa_vals[s.segment(tail_start)];
    const double the_n = s.theta_vals[s.segment(tail_start)];
    const double psi_n = s.psi_vals[s.segment(tail_start)];
    const double r_n = curve.rates[curve.segment(tail_start)];
    const double rho_n = r_n + kap_n;
    const double P_n = curve.discount(tail_start);

    InhomParts parts;
    parts.f = inhom_factor(s, t);
    parts.W = P_n / rho_n;
    parts.divint = kap_n * the_n * P_n / (r_n * rho_n);
    parts.J = psi_n * psi_n * P_n * P_n / (2.0 * r_n * rho_n * rho_n);

    // Backward sweep over the finite pieces.
    for (std::size_t i = bounds.size(); i-- > 0;) {
        const double b = bounds[i];
        const double a = i == 0 ? t : bounds[i - 1];
        const double delta = b - a;
        const double kap = s.kappa_vals[s.segment(a)];
        const double the = s.theta_vals[s.segment(a)];
        const double psi = s.psi_vals[s.segment(a)];
        const double r = curve.rates[curve.segment(a)];
        const double rho = r + kap;
        if (std::fabs(rho) < 1e-12)
            throw std::invalid_argument("schedule pricing: rate equal to -kappa unsupported");
        const double Pa = curve.discount(a);
        const double Pb = curve.discount(b);
        const double Wb = parts.W;

        parts.divint += kap * the *
                        ((Pa * exp_integral(-r, delta) - Pb * exp_integral(-kap, delta)) / rho +
                         Wb * exp_integral(-kap, delta));
        const double alpha = Pb / rho;
        const double beta = Wb - alpha;
        parts.J += psi * psi *
                   (alpha * alpha * exp_integral(2.0 * r, delta) +
                    2.0 * alpha * beta * exp_integral(r - kap, delta) +
                    beta * beta * exp_integral(-2.0 * kap, delta));
        parts.W = Pa * exp_integral(-rho, delta) + std::exp(-kap * delta) * Wb;
    }
    return parts;
}

} // namespace

ScheduleBundle schedule_bundle(const Schedule& s, const RateCurve& curve, double sigma,
                               double t) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("schedule_bundle: sigma must be >= 0");
    const InhomParts parts = inhom_parts(s, curve, t);
    ScheduleBundle b;
    b.t = t;
    b.f = parts.f;
    b.delta = std::exp(-parts.f) * parts.W;
    const double a = sigma * sigma * t * parts.J;
    b.z = a / (1.0 + a);
    return b;
}

SpotQuote spot_price(const MarketParams& mp, double t, double x, double xi) {
    mp.validate();
    check_time_and_info(t, xi);
    const DiscountBundle d = discount_bundle(mp, t);
    const double rk = mp.r + mp.ou.kappa;
    SpotQuote q;
    q.t = t;
    q.annuity_term =
        (1.0 - d.z) * (mp.ou.kappa * mp.ou.theta + mp.r * x) / (mp.r * rk);
    q.info_term = info_gain(mp, t) * xi / d.P;
    q.S = q.annuity_term + q.info_term;
    return q;
}

SpotQuote spot_price_general(const OuParams& ou, double sigma, const RateCurve& curve,
                             double t, double x, double xi) {
    ou.validate();
    curve.validate();
    if (!(sigma >= 0.0)) throw std::invalid_argument("spot_price_general: sigma must be >= 0");
    check_time_and_info(t, xi);
    const double P = curve.discount(t);
    const double p = curve.annuity(t);
    const double q_t = curve.damped_annuity(t, ou.kappa);
    const double I = curve.damped_annuity_sq_tail(t, ou.kappa);
    const double a = sigma * sigma * ou.psi * ou.psi * t * I;
    const double z = a / (1.0 + a);
    const double lambda = sigma * ou.psi * ou.psi * I / (1.0 + a);
    SpotQuote quote;
    quote.t = t;
    quote.annuity_term = (1.0 - z) * (ou.theta * p + q_t * (x - ou.theta)) / P;
    quote.info_term = lambda * xi / P;
    quote.S = quote.annuity_term + quote.info_term;
    return quote;
}

SpotQuote spot_price_inhom(const Schedule& s, const RateCurve& curve, double sigma, double t,
                           double x, double xi) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("spot_price_inhom: sigma must be >= 0");
    check_time_and_info(t, xi);
    const InhomParts parts = inhom_parts(s, curve, t);
    const double P = curve.discount(t);
    const double a = sigma * sigma * t * parts.J;
    const double z = a / (1.0 + a);
    const double lambda = sigma * parts.J / (1.0 + a);
    SpotQuote quote;
    quote.t = t;
    quote.annuity_term = (1.0 - z) * (parts.divint + parts.W * x) / P;
    quote.info_term = lambda * xi / P;
    quote.S = quote.annuity_term + quote.info_term;
    return quote;
}

std::vector<SpotQuote> spot_path(const PathBundle& bundle, const MarketParams& mp) {
    std::vector<SpotQuote> out(bundle.grid.size());
    for (std::size_t j = 0; j < bundle.grid.size(); ++j)
        out[j] = spot_price(mp, bundle.grid[j], bundle.X[j], bundle.xi[j]);
    return out;
}

void write_spot_csv(std::ostream& os, const std::vector<SpotQuote>& quotes) {
    os.precision(15);
    os << "t,S,annuity_term,info_term\n";
    for (const SpotQuote& q : quotes)
        os << q.t << ',' << q.S << ',' << q.annuity_term << ',' << q.info_term << '\n';
}

} // namespace cip
