#include "rsde/commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rsde/analysis.hpp"
#include "rsde/ensemble.hpp"
#include "rsde/models.hpp"
#include "rsde/output.hpp"
#include "rsde/validators.hpp"

namespace rsde {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array kAllModes{InputMode::white_noise, InputMode::ou_current, InputMode::ou_reflected,
                               InputMode::ou_reflected_jumps};

json seed_json(std::uint64_t master) {
    return {{"master", master}, {"scheme", "splitmix64-chained key -> mt19937_64"}};
}

// Runs one scenario ensemble into `out`; appends its retained paths to `long_rows`.
void simulate_into(const ConfigDocument& doc, const fs::path& out, std::ostream& long_rows) {
    const auto grid = doc.engine.grid();
    const auto model = make_scenario(doc.scenario());
    EnsembleOptions options;
    options.engine.jump_timing = doc.engine.jump_timing;
    options.retain = std::min(doc.output.retain, doc.engine.paths);
    const auto result = simulate_ensemble(model, grid, doc.engine.paths, doc.engine.seed, options);

    std::ostringstream panel;
    panel << kLongHeader << '\n';
    json paths = json::array();
    for (std::size_t p = 0; p < result.retained.size(); ++p) {
        const auto& bundle = result.retained[p];
        write_file(out / ("trajectory_" + std::to_string(p) + ".csv"), trajectory_csv(bundle));
        write_long_rows(panel, to_string(doc.mode), p, bundle);
        write_long_rows(long_rows, to_string(doc.mode), p, bundle);
        paths.push_back(summarize(bundle));
    }
    json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["scenario"] = to_string(doc.mode);
    summary["seed"] = seed_json(doc.engine.seed);
    summary["ensemble"] = summarize(result.stats);
    summary["paths"] = paths;
    summary["config"] = emit_config(doc);
    write_file(out / "summary.json", dump_json(summary));
    write_file(out / "panel_long.csv", panel.str());
}

ReflectedJumpSDE experiment_model(const ConfigDocument& doc) {
    const auto& e = *doc.experiment;
    switch (e.model) {
        case ExperimentModel::linear:
            return make_linear_model(2, 1.0, e.linear_sigma, {doc.x0_E, doc.x0_I});
        case ExperimentModel::zero:
            return make_zero_model(2, {doc.x0_E, doc.x0_I});
        case ExperimentModel::scenario:
            break;
    }
    return make_scenario(doc.scenario());
}

std::string_view model_label(ExperimentModel m) {
    switch (m) {
        case ExperimentModel::linear:
            return "linear";
        case ExperimentModel::zero:
            return "zero";
        case ExperimentModel::scenario:
            break;
    }
    return "scenario";
}

std::uint64_t parse_seed(std::string_view text, const char* origin) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw UsageError(std::string(origin) + ": not a non-negative integer seed: '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

void run_scenario(const ConfigDocument& doc, const fs::path& out) {
    std::ostringstream ignored;
    simulate_into(doc, out, ignored);
}

void run_panels(const ConfigDocument& doc, const fs::path& out) {
    std::ostringstream all;
    all << kLongHeader << '\n';
    for (const auto mode : kAllModes) {
        ConfigDocument panel = doc;
        panel.mode = mode;
        if (!uses_jumps(mode)) {
            panel.jumps.intensity_E.reset();
            panel.jumps.intensity_I.reset();
        }
        simulate_into(panel, out / std::string(to_string(mode)), all);
    }
    write_file(out / "panels_long.csv", all.str());
}

void run_experiment(const ConfigDocument& doc, ExperimentKind kind, const fs::path& out) {
    if (!doc.experiment) {
        throw UsageError("this command needs an [experiment] section in the config");
    }
    const auto& e = *doc.experiment;
    if (e.kind != kind) {
        throw UsageError("[experiment] kind does not match the command");
    }
    const auto model = experiment_model(doc);
    ExperimentOptions options;
    options.engine.jump_timing = doc.engine.jump_timing;

    json j;
    j["schema_version"] = kSchemaVersion;
    j["inputs"] = {{"model", model_label(e.model)},
                   {"scenario", to_string(doc.mode)},
                   {"paths", e.paths},
                   {"horizon", e.horizon},
                   {"seed", seed_json(doc.engine.seed)},
                   {"config", emit_config(doc)}};
    if (kind == ExperimentKind::stability) {
        const auto grid = SimulationGrid::uniform(e.dt, e.horizon);
        const auto r = stability_experiment(model, grid, e.offsets, e.paths, doc.engine.seed, {}, options);
        j["inputs"]["offsets"] = e.offsets;
        j["inputs"]["dt"] = e.dt;
        j["perturbation_sizes"] = r.perturbation_sizes;
        j["errors"] = r.errors;
        j["standard_errors"] = r.standard_errors;
        j["slope"] = r.fitted_slope;
        write_file(out / "stability.json", dump_json(j));
    } else {
        const auto r = strong_convergence_experiment(model, e.horizon, e.levels, e.paths, doc.engine.seed,
                                                     e.reference_offset, options);
        j["inputs"]["levels"] = e.levels;
        j["inputs"]["reference_level"] = r.reference_level;
        j["dt"] = r.dt;
        j["rms_error"] = r.rms_error;
        j["empirical_order"] = r.empirical_order;
        write_file(out / "convergence.json", dump_json(j));
    }
}

void run_validate(const ConfigDocument& doc, const fs::path& out) {
    constexpr std::size_t kSamples = 100000;
    const auto scenario = doc.scenario();
    const auto& p = scenario.params;
    // rates beyond 1/delta make the saturation factor negative
    const double top_E = p.delta_E > 0.0 ? 1.0 / p.delta_E : 1.0;
    const double top_I = p.delta_I > 0.0 ? 1.0 / p.delta_I : 1.0;
    const Box state_box{{0.0, 0.0}, {top_E, top_I}};

    const auto drift = [p](std::span<const double> x) {
        const auto d = wilson_cowan_drift({x[0], x[1]}, p, p.I_ext_E, p.I_ext_I);
        return std::vector<double>{d[0], d[1]};
    };
    const auto diffusion = [p](std::span<const double> x) {
        const auto g = wilson_cowan_diffusion({x[0], x[1]}, p);
        return std::vector<double>{g[0], g[1]};
    };
    const auto drift_est = estimate_lipschitz_constant(drift, state_box, kSamples, doc.engine.seed);
    const auto diff_est = estimate_lipschitz_constant(diffusion, state_box, kSamples, doc.engine.seed + 1);

    json gains = json::array();
    const std::array<std::pair<double, double>, 2> gain_params{{{p.theta_E, p.a_E}, {p.theta_I, p.a_I}}};
    for (std::size_t c = 0; c < 2; ++c) {
        const auto [theta, a] = gain_params[c];
        const auto F = [theta, a](std::span<const double> x) { return std::vector<double>{sigmoid_F(x[0], theta, a)}; };
        const auto est = estimate_lipschitz_constant(F, Box{{theta - 20.0}, {theta + 20.0}}, kSamples,
                                                     doc.engine.seed + 2 + c);
        gains.push_back({{"population", c == 0 ? "E" : "I"},
                         {"estimate", est.constant},
                         {"bound", a / 4.0},
                         {"pass", est.constant <= a / 4.0 + 1e-3}});
    }

    json jump_checks = json::array();
    for (std::size_t c = 0; c < 2; ++c) {
        const double rho = scenario.jump_response[c];
        const auto response = [rho](std::span<const double> x, double y) {
            return std::vector<double>(x.size(), rho * y);
        };
        const auto check =
            check_jump_coefficient_bound(response, scenario.jumps[c], state_box, kSamples, doc.engine.seed + 4 + c);
        jump_checks.push_back({{"population", c == 0 ? "E" : "I"},
                               {"growth_ratio", check.growth_ratio},
                               {"lipschitz_ratio", check.lipschitz_ratio},
                               {"c_rho", check.c_rho},
                               {"pass", check.pass}});
    }

    json j;
    j["schema_version"] = kSchemaVersion;
    j["box"] = {{"lo", state_box.lo}, {"hi", state_box.hi}};
    j["samples"] = kSamples;
    j["drift_lipschitz"] = drift_est.constant;
    j["diffusion_lipschitz"] = diff_est.constant;
    j["gain_lipschitz"] = gains;
    j["jump_response"] = jump_checks;
    j["config"] = emit_config(doc);
    write_file(out / "validation.json", dump_json(j));
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reflected jump-diffusion simulator for stochastic Wilson-Cowan populations", "rsde"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::optional<std::size_t> paths;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file");
        sub->add_option("--seed", seed, "master seed (overrides env and config)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--paths", paths, "number of trajectories")->check(CLI::PositiveNumber);
    };
    auto* simulate = app.add_subcommand("simulate", "run one scenario");
    auto* panels = app.add_subcommand("panels", "run all four input modes with one master seed");
    auto* stability = app.add_subcommand("stability", "initial-data stability sweep");
    auto* converge = app.add_subcommand("converge", "strong convergence of the dyadic scheme");
    auto* validate = app.add_subcommand("validate", "check coefficient assumptions");
    for (auto* sub : {simulate, panels, stability, converge, validate}) {
        add_common(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        ConfigDocument doc = config_path.empty() ? parse_config("") : load_config(config_path);
        if (seed) {
            doc.engine.seed = *seed;
        } else if (const char* env = std::getenv("SKOROKHOD_SDE_SEED"); env && *env) {
            doc.engine.seed = parse_seed(env, "SKOROKHOD_SDE_SEED");
        }
        const fs::path dir = out_dir.empty() ? fs::path(doc.output.dir) : fs::path(out_dir);

        if (simulate->parsed() || panels->parsed()) {
            if (paths) {
                doc.engine.paths = *paths;
            }
            if (simulate->parsed()) {
                run_scenario(doc, dir);
            } else {
                run_panels(doc, dir);
            }
        } else if (stability->parsed() || converge->parsed()) {
            if (paths && doc.experiment) {
                doc.experiment->paths = *paths;
            }
            run_experiment(doc, stability->parsed() ? ExperimentKind::stability : ExperimentKind::convergence, dir);
        } else {
            run_validate(doc, dir);
        }
        out << "wrote " << dir.string() << '\n';
        return kExitOk;
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return kExitConfig;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SimulationAbort& e) {
        err << "simulation aborted: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace rsde
