#include "cip/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace cip {
namespace {

using nlohmann::ordered_json;

void reject_unknown_keys(const ordered_json& obj, const std::vector<std::string>& known,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const std::string& k : known) ok = ok || item.key() == k;
        if (!ok)
            throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
    }
}

double require_number(const ordered_json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key))
        throw std::invalid_argument("config: missing key '" + key + "' in " + where);
    if (!obj.at(key).is_number())
        throw std::invalid_argument("config: key '" + key + "' in " + where +
                                    " must be a number");
    return obj.at(key).get<double>();
}

std::vector<double> require_array(const ordered_json& obj, const std::string& key,
                                  const std::string& where) {
    if (!obj.contains(key))
        throw std::invalid_argument("config: missing key '" + key + "' in " + where);
    const ordered_json& arr = obj.at(key);
    if (!arr.is_array())
        throw std::invalid_argument("config: key '" + key + "' in " + where +
                                    " must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number())
            throw std::invalid_argument("config: key '" + key + "' in " + where +
                                        " must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

void ModelConfig::validate() const {
    market.validate();
    if (schedule) schedule->validate();
    if (rate_curve) rate_curve->validate();
}

ModelConfig parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    reject_unknown_keys(
        j, {"kappa", "theta", "psi", "sigma", "r", "x0", "schedule", "rate_curve"},
        "top level");

    ModelConfig cfg;
    cfg.market.ou.kappa = require_number(j, "kappa", "top level");
    cfg.market.ou.theta = require_number(j, "theta", "top level");
    cfg.market.ou.psi = require_number(j, "psi", "top level");
    cfg.market.ou.x0 = require_number(j, "x0", "top level");
    cfg.market.sigma = require_number(j, "sigma", "top level");
    cfg.market.r = require_number(j, "r", "top level");

    if (j.contains("schedule")) {
        const ordered_json& s = j.at("schedule");
        if (!s.is_object()) throw std::invalid_argument("config: 'schedule' must be an object");
        reject_unknown_keys(s, {"breakpoints", "kappa", "theta", "psi"}, "schedule");
        Schedule sched;
        sched.breakpoints = require_array(s, "breakpoints", "schedule");
        sched.kappa_vals = require_array(s, "kappa", "schedule");
        sched.theta_vals = require_array(s, "theta", "schedule");
        sched.psi_vals = require_array(s, "psi", "schedule");
        cfg.schedule = std::move(sched);
    }
    if (j.contains("rate_curve")) {
        const ordered_json& c = j.at("rate_curve");
        if (!c.is_object())
            throw std::invalid_argument("config: 'rate_curve' must be an object");
        reject_unknown_keys(c, {"breakpoints", "rates"}, "rate_curve");
        RateCurve curve;
        curve.breakpoints = require_array(c, "breakpoints", "rate_curve");
        curve.rates = require_array(c, "rates", "rate_curve");
        cfg.rate_curve = std::move(curve);
    }

    cfg.validate();
    return cfg;
}

ModelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string emit_config(const ModelConfig& config) {
    ordered_json j;
    j["kappa"] = config.market.ou.kappa;
    j["theta"] = config.market.ou.theta;
    j["psi"] = config.market.ou.psi;
    j["sigma"] = config.market.sigma;
    j["r"] = config.market.r;
    j["x0"] = config.market.ou.x0;
    if (config.schedule) {
        j["schedule"]["breakpoints"] = config.schedule->breakpoints;
        j["schedule"]["kappa"] = config.schedule->kappa_vals;
        j["schedule"]["theta"] = config.schedule->theta_vals;
        j["schedule"]["psi"] = config.schedule->psi_vals;
    }
    if (config.rate_curve) {
        j["rate_curve"]["breakpoints"] = config.rate_curve->breakpoints;
        j["rate_curve"]["rates"] = config.rate_curve->rates;
    }
    return j.dump(2) + "\n";
}

TimeGrid parse_grid(const std::string& spec) {
    double vals[3];
    std::size_t idx = 0;
    std::size_t start = 0;
    for (int k = 0; k < 3; ++k) {
        const std::size_t colon = spec.find(':', start);
        const std::string tok = (k < 2) ? spec.substr(start, colon - start) : spec.substr(start);
        if ((k < 2 && colon == std::string::npos) || tok.empty())
            throw std::invalid_argument("grid: expected 'start:end:step', got '" + spec + "'");
        try {
            idx = 0;
            vals[k] = std::stod(tok, &idx);
        } catch (const std::exception&) {
            throw std::invalid_argument("grid: bad number '" + tok + "'");
        }
        if (idx != tok.size()) throw std::invalid_argument("grid: bad number '" + tok + "'");
        start = colon + 1;
    }
    if (!(vals[0] >= 0.0) || !(vals[1] >= vals[0]) || !(vals[2] > 0.0))
        throw std::invalid_argument("grid: need 0 <= start <= end and step > 0");
    return TimeGrid::regular(vals[0], vals[1], vals[2]);
}

} // namespace cip
