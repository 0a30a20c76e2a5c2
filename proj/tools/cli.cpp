// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "lcr/curve.hpp"
#include "lcr/error.hpp"
#include "lcr/profile.hpp"

namespace lcr::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const char* where) {
    if (!obj.is_object()) {
        throw InvalidArgument(std::string(where) + " must be a JSON object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw InvalidArgument(std::string("unknown key '") + key + "' in " + where);
        }
    }
}

analytic::Fading parse_fading(const std::string& name) {
    if (name == "rayleigh") return analytic::Fading::rayleigh;
    if (name == "rician") return analytic::Fading::rician;
    throw InvalidArgument("unknown fading '" + name + "' (expected rayleigh or rician)");
}

scenario::ScenarioParams parse_scenario(const json& j) {
    reject_unknown(j,
                   {"region_radius_m", "cr_radius_m", "density_per_km2", "activity_factor",
                    "shadow_sigma_db", "pathloss_exponent", "snr_penalty_db", "noise_power",
                    "seed", "power_norm"},
                   "scenario");
    scenario::ScenarioParams p;
    p.region_radius_m = j.value("region_radius_m", p.region_radius_m);
    p.cr_radius_m = j.value("cr_radius_m", p.cr_radius_m);
    p.density_per_km2 = j.value("density_per_km2", p.density_per_km2);
    p.activity_factor = j.value("activity_factor", p.activity_factor);
    p.shadow_sigma_db = j.value("shadow_sigma_db", p.shadow_sigma_db);
    p.pathloss_exponent = j.value("pathloss_exponent", p.pathloss_exponent);
    p.snr_penalty_db = j.value("snr_penalty_db", p.snr_penalty_db);
    p.noise_power = j.value("noise_power", p.noise_power);
    p.seed = j.value("seed", p.seed);
    if (j.contains("power_norm")) p.power_norm = j.at("power_norm").get<double>();
    return p;
}

mcsim::FadingSimConfig parse_sim(const json& j, mcsim::FadingSimConfig c) {
    reject_unknown(j, {"duration_s", "oversample", "oscillators", "seed", "workers"}, "sim");
    c.duration_s = j.value("duration_s", c.duration_s);
    c.oversample = j.value("oversample", c.oversample);
    c.oscillators = j.value("oscillators", c.oscillators);
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    return c;
}

// --- profile and grid resolution ---------------------------------------------

struct Resolved {
    InterfererProfile profile;
    analytic::Fading fading = analytic::Fading::rayleigh;
    double budget = 0.0;  // absolute interference threshold
};

class EmptyScenario : public Error {
public:
    using Error::Error;
};

Resolved resolve(const RunConfig& cfg) {
    Resolved r;
    double doppler = cfg.doppler_hz.value_or(25.0);
    if (cfg.scenario) {
        const auto& sp = *cfg.scenario;
        r.budget = scenario::snr_penalty_threshold(sp.snr_penalty_db, sp.noise_power);
        const auto cand = scenario::generate_candidates(sp);
        const auto idx = scenario::decentralized_select(std::span<const scenario::CandidateCR>(cand),
                                                        r.budget);
        if (idx.empty()) {
            throw EmptyScenario("no interferers admitted");
        }
        r.profile = scenario::admitted_profile(cand, idx, doppler, 0.0);
    } else {
        r.budget = scenario::snr_penalty_threshold(cfg.snr_penalty_db, 1.0);
        if (cfg.fixture) {
            r.profile = scenario::fixture_profile(*cfg.fixture, doppler, 0.0);
        } else {
            r.profile = read_profile(*cfg.profile_path);
            if (cfg.doppler_hz) r.profile = r.profile.with_doppler(*cfg.doppler_hz);
        }
    }

    double k = r.profile.rician_k_linear;
    if (cfg.k_db) k = std::pow(10.0, *cfg.k_db / 10.0);
    r.fading = cfg.fading.value_or(k > 0.0 ? analytic::Fading::rician : analytic::Fading::rayleigh);
    r.profile.rician_k_linear = r.fading == analytic::Fading::rayleigh ? 0.0 : k;
    r.profile.validate();
    return r;
}

std::vector<double> kappa_grid(const RunConfig& cfg, double threshold_kappa) {
    if (cfg.kappa_min || cfg.kappa_max) {
        return log_spaced_grid(cfg.kappa_min.value_or(0.05 * threshold_kappa),
                               cfg.kappa_max.value_or(3.0 * threshold_kappa), cfg.grid_points);
    }
    if (cfg.grid_points != 60) {
        return log_spaced_grid(0.05 * threshold_kappa, 3.0 * threshold_kappa, cfg.grid_points);
    }
    return default_kappa_grid(threshold_kappa);
}

// Analytic columns plus the threshold marker.
LcrCurve analytic_curve(const RunConfig& cfg, const Resolved& r) {
    const analytic::AggregateModel model(r.profile, r.fading, cfg.fit_fallback);
    const double k_th = r.budget / model.rms();
    LcrCurve curve = analytic::lcr_curve(r.profile, r.fading, kappa_grid(cfg, k_th), cfg.fit_fallback);
    mark_threshold(curve, k_th);
    return curve;
}

mcsim::InterferenceTrace simulate_trace(const RunConfig& cfg, const Resolved& r,
                                        std::optional<double> sim_doppler) {
    const InterfererProfile p = sim_doppler ? r.profile.with_doppler(*sim_doppler) : r.profile;
    return mcsim::aggregate_trace(p, cfg.sim);
}

void clear_analytic(LcrCurve& curve) {
    for (auto& pt : curve.points) {
        pt.lcr_norm_analytic.reset();
        pt.aed_norm_analytic.reset();
        pt.cdf_analytic.reset();
    }
}

// Writes `body` to the output path, or to `out` when none is set. Returns
// the stream for human-readable lines.
std::ostream& emit(const RunConfig& cfg, const std::string& body, std::ostream& out,
                   std::ostream& err) {
    if (!cfg.output_path) {
        out << body;
        return err;
    }
    std::ofstream f(*cfg.output_path, std::ios::binary);
    if (!f) {
        throw InvalidArgument("cannot write " + cfg.output_path->string());
    }
    f << body;
    if (!f) {
        throw InvalidArgument("write failed: " + cfg.output_path->string());
    }
    return out;
}

std::string csv(const LcrCurve& curve) {
    std::ostringstream s;
    write_curve_csv(s, curve);
    return s.str();
}

// --- commands ------------------------------------------------------------------

int cmd_scenario(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve(cfg);
    std::ostream& log = emit(cfg, profile_to_json(r.profile), out, err);
    log << "interferers=" << r.profile.size()
        << " total_power=" << format_number(r.profile.total_power())
        << " largest_share=" << format_number(r.profile.largest_share()) << '\n';
    return kOk;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve(cfg);
    const LcrCurve curve = analytic_curve(cfg, r);
    std::ostream& log = emit(cfg, csv(curve), out, err);
    log << "analyze: " << curve.points.size() << " rows\n";
    return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve(cfg);
    LcrCurve curve = analytic_curve(cfg, r);
    clear_analytic(curve);
    mcsim::fill_empirical(curve, simulate_trace(cfg, r, std::nullopt));
    std::ostream& log = emit(cfg, csv(curve), out, err);
    log << "simulate: " << curve.points.size() << " rows, "
        << format_number(cfg.sim.duration_s) << " s\n";
    return kOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve(cfg);
    LcrCurve curve = analytic_curve(cfg, r);
    mcsim::fill_empirical(curve, simulate_trace(cfg, r, cfg.sim_doppler_hz));

    double worst = 0.0;
    double worst_kappa = 0.0;
    std::size_t used = 0;
    for (const auto& pt : curve.points) {
        const double a = *pt.lcr_norm_analytic;
        if (!(a > 0.1)) continue;
        ++used;
        const double dev = std::abs(*pt.lcr_norm_emp - a) / a;
        if (dev > worst) {
            worst = dev;
            worst_kappa = pt.kappa;
        }
    }
    const bool pass = used > 0 && worst <= 0.15;
    std::ostream& log = emit(cfg, csv(curve), out, err);
    log << "compare: max_rel_dev=" << format_number(worst) << " at kappa="
        << format_number(worst_kappa) << " over " << used
        << " points with analytic LCR/f_D > 0.1: " << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? kOk : kComparisonFailed;
}

// --- argument handling -----------------------------------------------------------

struct Flags {
    std::string config;
    std::string fixture;
    std::string profile;
    std::string fading;
    double k_db = 0.0;
    double doppler = 0.0;
    double duration = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    unsigned workers = 0;
    double sim_doppler = 0.0;
    std::map<std::string, CLI::Option*> opts;

    bool given(const std::string& name) const {
        auto it = opts.find(name);
        return it != opts.end() && it->second->count() > 0;
    }
};

void add_common(CLI::App* cmd, Flags& f) {
    f.opts["config"] = cmd->add_option("--config", f.config, "JSON run configuration");
    f.opts["fixture"] = cmd->add_option("--fixture", f.fixture, "dominant | no_dominant");
    f.opts["profile"] = cmd->add_option("--profile", f.profile, "interferer profile JSON");
    f.opts["fading"] = cmd->add_option("--fading", f.fading, "rayleigh | rician");
    f.opts["k-db"] = cmd->add_option("--k-db", f.k_db, "Rician K-factor in dB");
    f.opts["doppler"] = cmd->add_option("--doppler", f.doppler, "Doppler frequency in Hz");
    f.opts["duration"] = cmd->add_option("--duration", f.duration, "simulated seconds");
    f.opts["seed"] = cmd->add_option("--seed", f.seed, "random seed");
    f.opts["out"] = cmd->add_option("--out", f.out, "output file (default: stdout)");
    f.opts["workers"] = cmd->add_option("--workers", f.workers, "simulation threads");
}

RunConfig build_config(const Flags& f) {
    RunConfig cfg;
    if (f.given("config")) {
        std::ifstream in(f.config);
        if (!in) {
            throw InvalidArgument("cannot open config " + f.config);
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        cfg = parse_config(buf.str());
    }
    auto clear_sources = [&] {
        cfg.scenario.reset();
        cfg.profile_path.reset();
        cfg.fixture.reset();
    };
    if (f.given("fixture")) {
        clear_sources();
        cfg.fixture = scenario::parse_fixture(f.fixture);
    }
    if (f.given("profile")) {
        if (f.given("fixture")) {
            throw InvalidArgument("--fixture and --profile are mutually exclusive");
        }
        clear_sources();
        cfg.profile_path = f.profile;
    }
    if (f.given("fading")) cfg.fading = parse_fading(f.fading);
    if (f.given("k-db")) cfg.k_db = f.k_db;
    if (f.given("doppler")) cfg.doppler_hz = f.doppler;
    if (f.given("duration")) cfg.sim.duration_s = f.duration;
    if (f.given("seed")) {
        cfg.sim.seed = f.seed;
        if (cfg.scenario) cfg.scenario->seed = f.seed;
    }
    if (f.given("out")) cfg.output_path = f.out;
    if (f.given("workers")) cfg.sim.workers = f.workers;
    if (f.given("sim-doppler")) cfg.sim_doppler_hz = f.sim_doppler;
    return cfg;
}

}  // namespace

mcsim::FadingSimConfig default_sim() {
    mcsim::FadingSimConfig c;
    c.workers = std::max(1u, std::thread::hardware_concurrency());
    return c;
}

RunConfig parse_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
        reject_unknown(j,
                       {"scenario", "profile_path", "fixture", "fading", "k_db", "doppler_hz",
                        "kappa_min", "kappa_max", "grid_points", "snr_penalty_db",
                        "fit_fallback", "sim", "output_path"},
                       "config");
        RunConfig c;
        if (j.contains("scenario")) c.scenario = parse_scenario(j.at("scenario"));
        if (j.contains("profile_path")) c.profile_path = j.at("profile_path").get<std::string>();
        if (j.contains("fixture")) c.fixture = scenario::parse_fixture(j.at("fixture").get<std::string>());
        if (j.contains("fading")) c.fading = parse_fading(j.at("fading").get<std::string>());
        if (j.contains("k_db")) c.k_db = j.at("k_db").get<double>();
        if (j.contains("doppler_hz")) c.doppler_hz = j.at("doppler_hz").get<double>();
        if (j.contains("kappa_min")) c.kappa_min = j.at("kappa_min").get<double>();
        if (j.contains("kappa_max")) c.kappa_max = j.at("kappa_max").get<double>();
        c.grid_points = j.value("grid_points", c.grid_points);
        c.snr_penalty_db = j.value("snr_penalty_db", c.snr_penalty_db);
        c.fit_fallback = j.value("fit_fallback", c.fit_fallback);
        if (j.contains("sim")) c.sim = parse_sim(j.at("sim"), c.sim);
        if (j.contains("output_path")) c.output_path = j.at("output_path").get<std::string>();
        return c;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config JSON: ") + e.what());
    }
}

void validate(const RunConfig& c) {
    const int sources = (c.scenario ? 1 : 0) + (c.profile_path ? 1 : 0) + (c.fixture ? 1 : 0);
    if (sources != 1) {
        throw InvalidArgument("exactly one of scenario, profile_path or fixture is required");
    }
    if (c.scenario) c.scenario->validate();
    if (c.kappa_min && !(*c.kappa_min > 0.0)) {
        throw InvalidArgument("kappa_min must be > 0");
    }
    if (c.kappa_min && c.kappa_max && !(*c.kappa_min < *c.kappa_max)) {
        throw InvalidArgument("kappa_min must be < kappa_max");
    }
    if (c.grid_points < 2) {
        throw InvalidArgument("grid_points must be >= 2");
    }
    if (c.doppler_hz && !(*c.doppler_hz > 0.0 && std::isfinite(*c.doppler_hz))) {
        throw InvalidArgument("doppler_hz must be > 0");
    }
    if (c.sim_doppler_hz && !(*c.sim_doppler_hz > 0.0 && std::isfinite(*c.sim_doppler_hz))) {
        throw InvalidArgument("sim doppler must be > 0");
    }
    if (c.k_db && !std::isfinite(*c.k_db)) {
        throw InvalidArgument("k_db must be finite");
    }
    if (!(c.snr_penalty_db >= 0.0)) {
        throw InvalidArgument("snr_penalty_db must be >= 0");
    }
    c.sim.validate();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Level crossing rates of aggregate cognitive-radio interference", "lcr"};
    app.require_subcommand(1);
    Flags flags;

    CLI::App* scenario_cmd = app.add_subcommand("scenario", "draw a deployment and write the admitted profile");
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "analytic LCR / AED / CDF curve as CSV");
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo LCR / AED / CDF curve as CSV");
    CLI::App* compare_cmd = app.add_subcommand("compare", "analytic vs simulated curve with a verdict");
    for (CLI::App* cmd : {scenario_cmd, analyze_cmd, simulate_cmd, compare_cmd}) {
        add_common(cmd, flags);
    }
    flags.opts["sim-doppler"] = compare_cmd->add_option(
        "--sim-doppler", flags.sim_doppler, "simulate at this Doppler (sensitivity check)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidConfig;
    }

    // Each subcommand registered its own copies of the options; only the
    // selected one carries counts.
    CLI::App* chosen = app.get_subcommands().front();
    for (auto& [name, opt] : flags.opts) {
        if (name == "sim-doppler") continue;
        opt = chosen->get_option_no_throw("--" + name);
    }

    try {
        RunConfig cfg = build_config(flags);
        validate(cfg);
        if (chosen == scenario_cmd) return cmd_scenario(cfg, out, err);
        if (chosen == analyze_cmd) return cmd_analyze(cfg, out, err);
        if (chosen == simulate_cmd) return cmd_simulate(cfg, out, err);
        return cmd_compare(cfg, out, err);
    } catch (const EmptyScenario& e) {
        err << "error: " << e.what() << '\n';
        return kEmptyScenario;
    } catch (const InfeasibleFitError& e) {
        err << "fit failure: " << e.what() << '\n';
        return kFitFailure;
    } catch (const ConvergenceError& e) {
        err << "fit failure: " << e.what() << '\n';
        return kFitFailure;
    } catch (const DegenerateInputError& e) {
        err << "fit failure: " << e.what() << '\n';
        return kFitFailure;
    } catch (const OverflowError& e) {
        err << "fit failure: " << e.what() << '\n';
        return kFitFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

}  // namespace lcr::cli
