#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cip::stats {

inline double mean(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("stats: empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

/// Unbiased sample variance (ddof = 1).
inline double variance(const std::vector<double>& x) {
    if (x.size() < 2) throw std::invalid_argument("stats: need >= 2 points");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

inline double covariance(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("stats: covariance needs equal sizes >= 2");
    const double mx = mean(x), my = mean(y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
    return s / static_cast<double>(x.size() - 1);
}

inline double correlation(const std::vector<double>& x, const std::vector<double>& y) {
    const double c = covariance(x, y);
    const double d = std::sqrt(variance(x) * variance(y));
    if (d == 0.0) throw std::invalid_argument("stats: correlation with degenerate sample");
    return c / d;
}

/// Standard error of the sample mean.
inline double mean_se(const std::vector<double>& x) {
    return std::sqrt(variance(x) / static_cast<double>(x.size()));
}

/// Standard error of the sample variance under approximate normality.
inline double variance_se(const std::vector<double>& x) {
    return variance(x) * std::sqrt(2.0 / static_cast<double>(x.size() - 1));
}

inline double median(std::vector<double> x) {
    if (x.empty()) throw std::invalid_argument("stats: empty sample");
    const std::size_t n = x.size();
    std::nth_element(x.begin(), x.begin() + n / 2, x.end());
    double hi = x[n / 2];
    if (n % 2 == 1) return hi;
    std::nth_element(x.begin(), x.begin() + n / 2 - 1, x.end());
    return 0.5 * (hi + x[n / 2 - 1]);
}

inline double skewness(const std::vector<double>& x) {
    const double m = mean(x);
    double s2 = 0.0, s3 = 0.0;
    for (double v : x) {
        const double d = v - m;
        s2 += d * d;
        s3 += d * d * d;
    }
    const double n = static_cast<double>(x.size());
    const double sd = std::sqrt(s2 / n);
    return (s3 / n) / (sd * sd * sd);
}

inline double excess_kurtosis(const std::vector<double>& x) {
    const double m = mean(x);
    double s2 = 0.0, s4 = 0.0;
    for (double v : x) {
        const double d = v - m;
        s2 += d * d;
        s4 += d * d * d * d;
    }
    const double n = static_cast<double>(x.size());
    const double v2 = s2 / n;
    return (s4 / n) / (v2 * v2) - 3.0;
}

struct OlsFit {
    double intercept = 0.0;
    double slope = 0.0;
    double intercept_se = 0.0;
    double slope_se = 0.0;
};

/// y = a + b x by least squares.
inline OlsFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("stats: ols needs equal sizes >= 3");
    const double n = static_cast<double>(x.size());
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("stats: ols with constant regressor");
    OlsFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - f.intercept - f.slope * x[i];
        rss += e * e;
    }
    const double s2 = rss / (n - 2.0);
    f.slope_se = std::sqrt(s2 / sxx);
    f.intercept_se = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    return f;
}

struct Ols3Fit {
    std::array<double, 3> coef{};    // intercept, slope on x1, slope on x2
    std::array<double, 3> se{};
};

/// y = c0 + c1 x1 + c2 x2 by least squares (normal equations, 3x3 solve).
inline Ols3Fit ols3(const std::vector<double>& x1, const std::vector<double>& x2,
                    const std::vector<double>& y) {
    const std::size_t n = y.size();
    if (x1.size() != n || x2.size() != n || n < 4)
        throw std::invalid_argument("stats: ols3 needs equal sizes >= 4");

    // Normal matrix in centered-free form: columns (1, x1, x2).
    double a11 = static_cast<double>(n), a12 = 0, a13 = 0, a22 = 0, a23 = 0, a33 = 0;
    double b1 = 0, b2 = 0, b3 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        a12 += x1[i];
        a13 += x2[i];
        a22 += x1[i] * x1[i];
        a23 += x1[i] * x2[i];
        a33 += x2[i] * x2[i];
        b1 += y[i];
        b2 += x1[i] * y[i];
        b3 += x2[i] * y[i];
    }
    double m[3][3] = {{a11, a12, a13}, {a12, a22, a23}, {a13, a23, a33}};
    double inv[3][3];
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (!(std::fabs(det) > 0.0)) throw std::invalid_argument("stats: singular design");
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = inv[0][1];
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = inv[0][2];
    inv[2][1] = inv[1][2];
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;

    Ols3Fit f;
    const double b[3] = {b1, b2, b3};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) f.coef[i] += inv[i][j] * b[j];

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - f.coef[0] - f.coef[1] * x1[i] - f.coef[2] * x2[i];
        rss += e * e;
    }
    const double s2 = rss / (static_cast<double>(n) - 3.0);
    for (int i = 0; i < 3; ++i) f.se[i] = std::sqrt(s2 * inv[i][i]);
    return f;
}

} // namespace cip::stats
