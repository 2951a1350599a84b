#pragma once

#include <cmath>

namespace cip {

/// ∫_0^delta e^{c u} du, continuous through c = 0.
inline double exp_integral(double c, double delta) {
    if (c == 0.0) return delta;
    return std::expm1(c * delta) / c;
}

/// 1 - e^{-y} without cancellation for small y.
inline double one_m_exp(double y) { return -std::expm1(-y); }

} // namespace cip
