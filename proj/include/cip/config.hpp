#pragma once

#include <optional>
#include <string>

#include "cip/market.hpp"
#include "cip/ou.hpp"
#include "cip/rate_curve.hpp"

namespace cip {

/// Model description as read from a JSON config file. The flat numeric fields
/// define MarketParams; the optional sections enable the time-varying
/// parameter schedule and the non-flat rate curve.
struct ModelConfig {
    MarketParams market;
    std::optional<Schedule> schedule;
    std::optional<RateCurve> rate_curve;

    void validate() const;
};

/// Parses {kappa, theta, psi, sigma, r, x0, schedule?, rate_curve?}. All six
/// numbers are required; unknown keys anywhere are rejected.
ModelConfig parse_config(const std::string& json_text);

ModelConfig load_config(const std::string& path);

/// Emits JSON that parses back to an identical config (numbers round-trip).
std::string emit_config(const ModelConfig& config);

/// "a:b:h" -> grid {0} ∪ {a, a+h, ..., b}. Requires 0 <= a <= b and h > 0.
TimeGrid parse_grid(const std::string& spec);

} // namespace cip
