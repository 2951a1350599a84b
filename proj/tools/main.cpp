#include <cctype>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cip/calibration.hpp"
#include "cip/config.hpp"
#include "cip/derivatives.hpp"
#include "cip/market.hpp"
#include "cip/oracle.hpp"
#include "cip/parallel.hpp"
#include "cip/pricing.hpp"
#include "cip/rng.hpp"

namespace {

using namespace cip;

// Commands that simulate or use the single-rate closed forms need the plain
// parameter set; reject configs carrying the generalized sections instead of
// silently ignoring them.
MarketParams flat_market(const ModelConfig& cfg, const std::string& cmd) {
    if (cfg.schedule || cfg.rate_curve)
        throw std::invalid_argument(
            cmd + ": schedule/rate_curve config sections are not supported by this command");
    return cfg.market;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot open output file '" + path + "'");
    os << std::setprecision(15);
    return os;
}

std::vector<double> read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("calibrate: cannot open '" + path + "'");
    std::vector<double> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t idx = 0;
        bool ok = true;
        double v = 0.0;
        try {
            v = std::stod(line, &idx);
        } catch (const std::exception&) {
            ok = false;
        }
        while (ok && idx < line.size() && std::isspace(static_cast<unsigned char>(line[idx])))
            ++idx;
        if (ok && idx == line.size()) {
            out.push_back(v);
        } else if (!first) {
            throw std::invalid_argument("calibrate: bad line '" + line + "' in " + path);
        }
        first = false;    // a non-numeric first line is treated as the header
    }
    return out;
}

int cmd_price(const ModelConfig& cfg, double t, std::optional<double> x_opt, double xi) {
    const double x = x_opt.value_or(cfg.market.ou.x0);
    SpotQuote q;
    if (cfg.schedule) {
        const RateCurve curve =
            cfg.rate_curve ? *cfg.rate_curve : RateCurve::constant(cfg.market.r);
        q = spot_price_inhom(*cfg.schedule, curve, cfg.market.sigma, t, x, xi);
    } else if (cfg.rate_curve) {
        q = spot_price_general(cfg.market.ou, cfg.market.sigma, *cfg.rate_curve, t, x, xi);
    } else {
        q = spot_price(cfg.market, t, x, xi);
    }
    std::cout << "t " << q.t << "\n"
              << "S " << q.S << "\n"
              << "annuity_term " << q.annuity_term << "\n"
              << "info_term " << q.info_term << "\n";
    if (q.S < 0.0) std::cout << "warning negative_price\n";
    return 0;
}

int cmd_simulate(const ModelConfig& cfg, const std::string& grid_spec, std::size_t paths,
                 std::uint64_t seed, const std::string& out_path) {
    const MarketParams mp = flat_market(cfg, "simulate");
    const TimeGrid grid = parse_grid(grid_spec);
    std::vector<PathBundle> bundles(paths);
    parallel_for(paths, [&](std::size_t i) {
        Rng rng = Rng::substream(seed, i);
        bundles[i] = simulate_joint(mp, grid, rng);
    });
    std::ofstream os = open_out(out_path);
    os << "path_id,t,X,B,G,xi,omega,S\n";
    for (std::size_t i = 0; i < paths; ++i) {
        const PathBundle& b = bundles[i];
        const std::vector<SpotQuote> quotes = spot_path(b, mp);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            os << i << ',' << grid[j] << ',' << b.X[j] << ',' << b.B[j] << ',' << b.G[j] << ','
               << b.xi[j] << ',' << b.omega[j] << ',' << quotes[j].S << '\n';
        }
    }
    return 0;
}

int cmd_option(const ModelConfig& cfg, const std::string& kind, double strike,
               const std::vector<double>& maturities, std::optional<double> futures_T) {
    const MarketParams mp = flat_market(cfg, "option");
    const bool on_futures = kind == "futures";
    if (on_futures && !futures_T)
        throw std::invalid_argument("option: --futures-maturity is required for kind=futures");
    std::cout << "kind " << kind << "\n"
              << "strike " << strike << "\n";
    if (on_futures) std::cout << "futures_maturity " << *futures_T << "\n";
    for (double T : maturities) {
        OptionSpec spec;
        spec.strike = strike;
        spec.maturity = T;
        spec.underlying =
            on_futures ? OptionSpec::Underlying::futures : OptionSpec::Underlying::spot;
        if (on_futures) spec.futures_maturity = *futures_T;
        GaussianLaw law;
        double price = 0.0;
        if (on_futures) {
            law = futures_terminal_law(mp, T, *futures_T);
            price = call_on_futures(mp, spec);
        } else {
            law = spot_terminal_law(mp, T);
            price = call_on_spot(mp, spec);
        }
        std::cout << "maturity " << T << " price " << price << " mean " << law.mean
                  << " variance " << law.variance << "\n";
    }
    return 0;
}

int cmd_surface(const ModelConfig& cfg, double strike, double theta_min, double theta_max,
                std::size_t theta_steps, double t_min, double t_max, std::size_t t_steps,
                const std::string& out_path) {
    const MarketParams mp = flat_market(cfg, "surface");
    std::ofstream os = open_out(out_path);
    write_call_surface(os, mp, strike, theta_min, theta_max, theta_steps, t_min, t_max,
                       t_steps);
    return 0;
}

int cmd_verify(const ModelConfig& cfg, const std::string& suite, std::uint64_t seed,
               std::size_t paths, const std::optional<std::string>& grid_spec,
               const std::optional<std::string>& out_path) {
    const MarketParams mp = flat_market(cfg, "verify");
    SuiteSettings settings;
    settings.seed = seed;
    settings.paths = paths;
    if (grid_spec) settings.grid = parse_grid(*grid_spec);
    const VerificationReport report = run_suite(suite, mp, settings);
    const std::string json = report_to_json(report);
    std::cout << json;
    if (out_path) {
        std::ofstream os = open_out(*out_path);
        os << json;
    }
    return report.all_passed() ? 0 : 1;
}

int cmd_calibrate(const std::optional<std::string>& series_path, double dt,
                  std::optional<double> s0, std::optional<double> s_inf,
                  const std::optional<ModelConfig>& cfg) {
    if (series_path) {
        const OuFit fit = ou_fit(read_series(*series_path), dt);
        nlohmann::ordered_json j;
        j["kappa"] = fit.params.kappa;
        j["theta"] = fit.params.theta;
        j["psi"] = fit.params.psi;
        j["x0"] = fit.params.x0;
        j["kappa_se"] = fit.kappa_se;
        j["theta_se"] = fit.theta_se;
        j["psi_se"] = fit.psi_se;
        j["log_likelihood"] = fit.log_likelihood;
        j["n_obs"] = fit.n_obs;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (s0 && s_inf) {
        if (!cfg)
            throw std::invalid_argument(
                "calibrate: --config is required with --s0/--s-inf (supplies r and kappa)");
        const ImpliedInitials ii =
            implied_initials(*s0, *s_inf, cfg->market.r, cfg->market.ou.kappa);
        nlohmann::ordered_json j;
        j["theta"] = ii.theta;
        j["x0"] = ii.x0;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    throw std::invalid_argument("calibrate: provide --series PATH, or both --s0 and --s-inf");
}

int run(int argc, char** argv) {
    std::cout << std::setprecision(15);
    CLI::App app{"Storable-commodity pricing: closed-form spot/futures/options from a "
                 "mean-reverting convenience dividend observed through a noisy information "
                 "process, with exact simulation and Monte Carlo verification."};
    app.require_subcommand(1);

    std::string config_path;
    std::string grid_spec;
    std::string out_path;
    std::uint64_t seed = 0;
    std::size_t paths = 0;

    auto* price = app.add_subcommand("price", "Spot price at a given state");
    double t = 0.0, x = 0.0, xi = 0.0;
    price->add_option("--config", config_path, "model config JSON")->required();
    price->add_option("--t", t, "valuation time (default 0)");
    auto* price_x = price->add_option("--x", x, "dividend level (default: config x0)");
    price->add_option("--xi", xi, "information value (must be 0 at t=0)");

    auto* simulate = app.add_subcommand("simulate", "Joint paths of the dividend, the "
                                                    "information process, and the price");
    simulate->add_option("--config", config_path, "model config JSON")->required();
    simulate->add_option("--grid", grid_spec, "time grid start:end:step")->required();
    simulate->add_option("--paths", paths, "number of paths")->required();
    simulate->add_option("--seed", seed, "RNG seed")->required();
    simulate->add_option("--out", out_path, "output CSV path")->required();

    auto* option = app.add_subcommand("option", "European call prices and terminal laws");
    std::string kind = "spot";
    double strike = 10.0;
    std::vector<double> maturities;
    double futures_T = 0.0;
    option->add_option("--config", config_path, "model config JSON")->required();
    option->add_option("--kind", kind, "underlying: spot or futures")
        ->check(CLI::IsMember({"spot", "futures"}));
    option->add_option("--strike", strike, "strike")->required();
    option->add_option("--maturity", maturities, "option maturity (repeatable)")->required();
    auto* option_ft =
        option->add_option("--futures-maturity", futures_T, "delivery time (kind=futures)");

    auto* surface = app.add_subcommand("surface", "Call-price grid over reversion level "
                                                  "and maturity");
    double theta_min = 0.3, theta_max = 0.8, t_min = 0.12, t_max = 3.0;
    std::size_t theta_steps = 11, t_steps = 25;
    surface->add_option("--config", config_path, "model config JSON")->required();
    surface->add_option("--strike", strike, "strike (default 10)");
    surface->add_option("--theta-min", theta_min, "lowest reversion level");
    surface->add_option("--theta-max", theta_max, "highest reversion level");
    surface->add_option("--theta-steps", theta_steps, "points on the reversion-level axis");
    surface->add_option("--t-min", t_min, "shortest maturity (> 0)");
    surface->add_option("--t-max", t_max, "longest maturity");
    surface->add_option("--t-steps", t_steps, "points on the maturity axis");
    surface->add_option("--out", out_path, "output CSV path")->required();

    auto* verify = app.add_subcommand("verify", "Monte Carlo verification suites");
    std::string suite;
    verify->add_option("--config", config_path, "model config JSON")->required();
    verify->add_option("--suite", suite,
                       "moments|bridge|projection|spot_law|sde|martingale|futures|options|all")
        ->required();
    verify->add_option("--seed", seed, "RNG seed")->required();
    auto* verify_paths = verify->add_option("--paths", paths, "paths per ensemble (default 20000)");
    auto* verify_grid = verify->add_option("--grid", grid_spec, "checkpoint grid start:end:step");
    auto* verify_out = verify->add_option("--out", out_path, "also write the JSON report here");

    auto* calibrate = app.add_subcommand("calibrate", "Dividend-series fit or price-level "
                                                      "inversion");
    std::string series_path;
    double dt = 1.0, s0 = 0.0, s_inf = 0.0;
    auto* cal_series =
        calibrate->add_option("--series", series_path, "CSV with one dividend level per row");
    calibrate->add_option("--dt", dt, "series sampling interval (default 1)");
    auto* cal_s0 = calibrate->add_option("--s0", s0, "observed initial spot price");
    auto* cal_sinf = calibrate->add_option("--s-inf", s_inf, "long-run spot price level");
    auto* cal_config = calibrate->add_option("--config", config_path, "model config JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*price)
        return cmd_price(load_config(config_path), t,
                         price_x->count() ? std::optional<double>(x) : std::nullopt, xi);
    if (*simulate) return cmd_simulate(load_config(config_path), grid_spec, paths, seed, out_path);
    if (*option)
        return cmd_option(load_config(config_path), kind, strike, maturities,
                          option_ft->count() ? std::optional<double>(futures_T) : std::nullopt);
    if (*surface)
        return cmd_surface(load_config(config_path), strike, theta_min, theta_max, theta_steps,
                           t_min, t_max, t_steps, out_path);
    if (*verify)
        return cmd_verify(load_config(config_path), suite, seed,
                          verify_paths->count() ? paths : 20000,
                          verify_grid->count() ? std::optional<std::string>(grid_spec)
                                               : std::nullopt,
                          verify_out->count() ? std::optional<std::string>(out_path)
                                              : std::nullopt);
    if (*calibrate)
        return cmd_calibrate(
            cal_series->count() ? std::optional<std::string>(series_path) : std::nullopt, dt,
            cal_s0->count() ? std::optional<double>(s0) : std::nullopt,
            cal_sinf->count() ? std::optional<double>(s_inf) : std::nullopt,
            cal_config->count() ? std::optional<ModelConfig>(load_config(config_path))
                                : std::nullopt);
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
