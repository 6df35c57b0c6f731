#include "rsde/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rsde {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
    s = trim(s);
    if (s.empty()) {
        return std::nullopt;
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (s.front() == '+') {
            s.remove_prefix(1);
        }
    }
    T value{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return value;
}

template <class T>
std::optional<std::vector<T>> parse_list(std::string_view s) {
    std::vector<T> out;
    s = trim(s);
    if (s.empty()) {
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        const auto item = s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        auto v = parse_number<T>(item);
        if (!v) {
            return std::nullopt;
        }
        out.push_back(*v);
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

template <class T>
std::string format_list(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
            s += ", ";
        }
        if constexpr (std::is_floating_point_v<T>) {
            s += format_double(v[i]);
        } else {
            s += std::to_string(v[i]);
        }
    }
    return s;
}

std::string_view family_name(JumpSizeFamily f) {
    switch (f) {
        case JumpSizeFamily::constant:
            return "constant";
        case JumpSizeFamily::exponential:
            return "exponential";
        case JumpSizeFamily::uniform:
            return "uniform";
    }
    return "exponential";
}

std::string_view timing_name(JumpTiming t) {
    return t == JumpTiming::split ? "split" : "end_of_step";
}

std::string_view kind_name(ExperimentKind k) {
    return k == ExperimentKind::stability ? "stability" : "convergence";
}

std::string_view model_name(ExperimentModel m) {
    switch (m) {
        case ExperimentModel::scenario:
            return "scenario";
        case ExperimentModel::linear:
            return "linear";
        case ExperimentModel::zero:
            return "zero";
    }
    return "scenario";
}

// A setter returns an error message when the value has the wrong type.
using Setter = std::function<std::optional<std::string>(ConfigDocument&, std::string_view)>;
using Getter = std::function<std::optional<std::string>(const ConfigDocument&)>;

struct KeySpec {
    std::string section;
    std::string key;
    Setter set;
    Getter get;
};

template <class Member>
KeySpec real_key(std::string section, std::string key, Member member) {
    return {std::move(section), std::move(key),
            [member](ConfigDocument& d, std::string_view v) -> std::optional<std::string> {
                auto x = parse_number<double>(v);
                if (!x) {
                    return "expected a real number";
                }
                std::invoke(member, d) = *x;
                return std::nullopt;
            },
            [member](const ConfigDocument& d) -> std::optional<std::string> {
                return format_double(std::invoke(member, d));
            }};
}

template <class Int, class Member>
KeySpec int_key(std::string section, std::string key, Member member) {
    return {std::move(section), std::move(key),
            [member](ConfigDocument& d, std::string_view v) -> std::optional<std::string> {
                auto x = parse_number<Int>(v);
                if (!x) {
                    return "expected an integer";
                }
                std::invoke(member, d) = *x;
                return std::nullopt;
            },
            [member](const ConfigDocument& d) -> std::optional<std::string> {
                return std::to_string(std::invoke(member, d));
            }};
}

template <class Member>
KeySpec optional_real_key(std::string section, std::string key, Member member) {
    return {std::move(section), std::move(key),
            [member](ConfigDocument& d, std::string_view v) -> std::optional<std::string> {
                auto x = parse_number<double>(v);
                if (!x) {
                    return "expected a real number";
                }
                std::invoke(member, d) = *x;
                return std::nullopt;
            },
            [member](const ConfigDocument& d) -> std::optional<std::string> {
                const auto& o = std::invoke(member, d);
                return o ? std::optional<std::string>(format_double(*o)) : std::nullopt;
            }};
}

ExperimentSection& experiment_of(ConfigDocument& d) {
    if (!d.experiment) {
        d.experiment.emplace();
    }
    return *d.experiment;
}

// Experiment keys only exist when the section does.
template <class Field>
KeySpec experiment_key(std::string key, Field field,
                       std::function<std::optional<std::string>(Field&, std::string_view)> parse,
                       std::function<std::string(const Field&)> format) = delete;

std::vector<KeySpec> build_keys() {
    std::vector<KeySpec> keys;
    keys.push_back({"scenario", "mode",
                    [](ConfigDocument& d, std::string_view v) -> std::optional<std::string> {
                        try {
                            d.mode = input_mode_from_string(trim(v));
                        } catch (const std::invalid_argument&) {
                            return "expected one of white_noise, ou_current, ou_reflected, ou_reflected_jumps";
                        }
                        return std::nullopt;
                    },
                    [](const ConfigDocument& d) { return std::optional<std::string>(std::string(to_string(d.mode))); }});
    keys.push_back(real_key("scenario", "x0_E", &ConfigDocument::x0_E));
    keys.push_back(real_key("scenario", "x0_I", &ConfigDocument::x0_I));

    const auto param = [&keys](const char* name, double WilsonCowanParams::*field) {
        keys.push_back(real_key("params", name, [field](auto& d) -> auto& { return d.params.*field; }));
    };
    param("tau_E", &WilsonCowanParams::tau_E);
    param("tau_I", &WilsonCowanParams::tau_I);
    param("theta_E", &WilsonCowanParams::theta_E);
    param("theta_I", &WilsonCowanParams::theta_I);
    param("a_E", &WilsonCowanParams::a_E);
    param("a_I", &WilsonCowanParams::a_I);
    param("w_EE", &WilsonCowanParams::w_EE);
    param("w_EI", &WilsonCowanParams::w_EI);
    param("w_IE", &WilsonCowanParams::w_IE);
    param("w_II", &WilsonCowanParams::w_II);
    param("delta_E", &WilsonCowanParams::delta_E);
    param("delta_I", &WilsonCowanParams::delta_I);
    param("sigma_ext_E", &WilsonCowanParams::sigma_ext_E);
    param("sigma_ext_I", &WilsonCowanParams::sigma_ext_I);
    param("I_ext_E", &WilsonCowanParams::I_ext_E);
    param("I_ext_I", &WilsonCowanParams::I_ext_I);

    keys.push_back(real_key("ou", "mu", [](auto& d) -> auto& { return d.ou.mu; }));
    keys.push_back(real_key("ou", "gamma", [](auto& d) -> auto& { return d.ou.gamma; }));
    keys.push_back(real_key("ou", "sigma", [](auto& d) -> auto& { return d.ou.sigma; }));
    keys.push_back(real_key("ou", "v0", [](auto& d) -> auto& { return d.ou.v0; }));

    keys.push_back(optional_real_key("jumps", "intensity_E", [](auto& d) -> auto& { return d.jumps.intensity_E; }));
    keys.push_back(optional_real_key("jumps", "intensity_I", [](auto& d) -> auto& { return d.jumps.intensity_I; }));
    keys.push_back({"jumps", "size_dist",
                    [](ConfigDocument& d, std::string_view v) -> std::optional<std::string> {
                        v = trim(v);
                        for (auto f : {JumpSizeFamily::constant, JumpSizeFamily::exponential, JumpSizeFamily::uniform}) {
                            if (family_name(f) == v) {
                                d.jumps.family = f;
                                return std::nullopt;
                            }
                        }
                        return "expected one of constant, exponential, uniform";
                    },
                    [](const ConfigDocument& d) {
                        return std::optional<std::string>(std::string(family_name(d.jumps.family)));
                    }});
    keys.push_back(real_key("jumps", "size_value", [](auto& d) -> auto& { return d.jumps.size_value; }));
    keys.push_back(real_key("jumps", "size_mean", [](auto& d) -> auto& { return d.jumps.size_mean; }));
    keys.push_back(real_key("jumps", "size_lo", [](auto& d) -> auto& { return d.jumps.size_lo; }));
    keys.push_back(real_key("jumps", "size_hi", [](auto& d) -> auto& { return d.jumps.size_hi; }));
    keys.push_back(real_key("jumps", "rho_E", [](auto& d) -> auto& { return d.jumps.rho_E; }));
    keys.push_back(real_key("jumps", "rho_I", [](auto& d) -> auto& { return d.jumps.rho_I; }));

    keys.push_back(real_key("engine", "horizon", [](auto& d) -> auto& { return d.engine.horizon; }));
    keys.push_back(real_key("engine", "dt", [](auto& d) -> auto& { return d.engine.dt; }));
    keys.push_back({"engine", "level",
                    [](ConfigDocument& d, std::string_view v) -> std::optional<std::string> {
                        auto x = parse_number<int>(v);
                        if (!x) {
                            return "expected an integer";
                        }
                        d.engine.level = *x;
                        return std::nullopt;
                    },
                    [](const ConfigDocument& d) -> std::optional<std::string> {
                        return d.engine.level ? std::optional<std::string>(std::to_string(*d.engine.level))
                                              : std::nullopt;
                    }});
    keys.push_back(int_key<std::uint64_t>("engine", "seed", [](auto& d) -> auto& { return d.engine.seed; }));
    keys.push_back(int_key<std::size_t>("engine", "paths", [](auto& d) -> auto& { return d.engine.paths; }));
    keys.push_back({"engine", "jump_timing",
                    [](ConfigDocument& d, std::string_view v) -> std::optional<std::string> {
                        v = trim(v);
                        if (v == "end_of_step") {
                            d.engine.jump_timing = JumpTiming::end_of_step;
                        } else if (v == "split") {
                            d.engine.jump_timing = JumpTiming::split;
                        } else {
                            return "expected end_of_step or split";
                        }
                        return std::nullopt;
                    },
                    [](const ConfigDocument& d) {
                        return std::optional<std::string>(std::string(timing_name(d.engine.jump_timing)));
                    }});

    keys.push_back({"output", "dir",
                    [](ConfigDocument& d, std::string_view v) -> std::optional<std::string> {
                        d.output.dir = std::string(trim(v));
                        return std::nullopt;
                    },
                    [](const ConfigDocument& d) { return std::optional<std::string>(d.output.dir); }});
    keys.push_back(int_key<std::size_t>("output", "retain", [](auto& d) -> auto& { return d.output.retain; }));

    // experiment: getters return nullopt when the section is absent
    const auto exp_get = [](auto fmt) {
        return [fmt](const ConfigDocument& d) -> std::optional<std::string> {
            if (!d.experiment) {
                return std::nullopt;
            }
            return fmt(*d.experiment);
        };
    };
    keys.push_back({"experiment", "kind",
                    [](ConfigDocument& d, std::string_view v) -> std::optional<std::string> {
                        v = trim(v);
                        if (v == "stability") {
                            experiment_of(d).kind = ExperimentKind::stability;
                        } else if (v == "convergence") {
                            experiment_of(d).kind = ExperimentKind::convergence;
                        } else {
                            return "expected stability or convergence";
                        }
                        return std::nullopt;
                    },
                    exp_get([](const ExperimentSection& e) { return std::string(kind_name(e.kind)); })});
    keys.push_back({"experiment", "model",
                    [](ConfigDocument& d, std::string_view v) -> std::optional<std::string> {
                        v = trim(v);
                        for (auto m : {ExperimentModel::scenario, ExperimentModel::linear, ExperimentModel::zero}) {
                            if (model_name(m) == v) {
                                experiment_of(d).model = m;
                                return std::nullopt;
                            }
                        }
                        return "expected scenario, linear or zero";
                    },
                    exp_get([](const ExperimentSection& e) { return std::string(model_name(e.model)); })});
    keys.push_back({"experiment", "offsets",
                    [](ConfigDocument& d, std::string_view v) -> std::optional<std::string> {
                        auto x = parse_list<double>(v);
                        if (!x) {
                            return "expected a comma-separated list of reals";
                        }
                        experiment_of(d).offsets = *x;
                        return std::nullopt;
                    },
                    exp_get([](const ExperimentSection& e) { return format_list(e.offsets); })});
    keys.push_back({"experiment", "levels",
                    [](ConfigDocument& d, std::string_view v) -> std::optional<std::string> {
                        auto x = parse_list<int>(v);
                        if (!x) {
                            return "expected a comma-separated list of integers";
                        }
                        experiment_of(d).levels = *x;
                        return std::nullopt;
                    },
                    exp_get([](const ExperimentSection& e) { return format_list(e.levels); })});
    const auto exp_number = [&](const char* key, auto field, auto parse, const char* expected, auto fmt) {
        keys.push_back({"experiment", key,
                        [field, parse, expected](ConfigDocument& d, std::string_view v) -> std::optional<std::string> {
                            auto x = parse(v);
                            if (!x) {
                                return std::string(expected);
                            }
                            experiment_of(d).*field = *x;
                            return std::nullopt;
                        },
                        exp_get([field, fmt](const ExperimentSection& e) { return fmt(e.*field); })});
    };
    const auto real = [](std::string_view v) { return parse_number<double>(v); };
    const auto fmt_real = [](double v) { return format_double(v); };
    exp_number("reference_offset", &ExperimentSection::reference_offset,
               [](std::string_view v) { return parse_number<int>(v); }, "expected an integer",
               [](int v) { return std::to_string(v); });
    exp_number("paths", &ExperimentSection::paths, [](std::string_view v) { return parse_number<std::size_t>(v); },
               "expected an integer", [](std::size_t v) { return std::to_string(v); });
    exp_number("horizon", &ExperimentSection::horizon, real, "expected a real number", fmt_real);
    exp_number("dt", &ExperimentSection::dt, real, "expected a real number", fmt_real);
    exp_number("linear_sigma", &ExperimentSection::linear_sigma, real, "expected a real number", fmt_real);
    return keys;
}

const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> keys = build_keys();
    return keys;
}

bool is_integer_multiple(double horizon, double dt) {
    const double ratio = horizon / dt;
    const double steps = std::round(ratio);
    return steps >= 1.0 && std::abs(ratio - steps) <= 1e-9 * steps;
}

class Checker {
public:
    Checker(std::vector<ConfigIssue>& issues, const std::map<std::string, std::size_t>& lines)
        : issues_(issues), lines_(lines) {}

    void require(bool ok, const std::string& key, const std::string& message,
                 ConfigErrorCode code = ConfigErrorCode::invariant_violation) {
        if (!ok) {
            const auto it = lines_.find(key);
            issues_.push_back({code, it == lines_.end() ? 0 : it->second, key, message});
        }
    }

private:
    std::vector<ConfigIssue>& issues_;
    const std::map<std::string, std::size_t>& lines_;
};

void check_invariants(const ConfigDocument& d, const std::map<std::string, std::size_t>& lines,
                      std::vector<ConfigIssue>& issues) {
    Checker c(issues, lines);
    const auto& p = d.params;
    const auto finite = [](double v) { return std::isfinite(v); };

    c.require(finite(d.x0_E) && (!reflects(d.mode) || d.x0_E >= 0.0), "scenario.x0_E",
              "initial state must lie in the domain (>= 0 for reflecting scenarios)");
    c.require(finite(d.x0_I) && (!reflects(d.mode) || d.x0_I >= 0.0), "scenario.x0_I",
              "initial state must lie in the domain (>= 0 for reflecting scenarios)");

    c.require(p.tau_E > 0.0 && finite(p.tau_E), "params.tau_E", "tau_E must be positive");
    c.require(p.tau_I > 0.0 && finite(p.tau_I), "params.tau_I", "tau_I must be positive");
    c.require(p.a_E > 0.0 && finite(p.a_E), "params.a_E", "a_E must be positive");
    c.require(p.a_I > 0.0 && finite(p.a_I), "params.a_I", "a_I must be positive");
    c.require(p.delta_E >= 0.0 && p.delta_E <= 1.0, "params.delta_E", "delta_E must lie in [0, 1]");
    c.require(p.delta_I >= 0.0 && p.delta_I <= 1.0, "params.delta_I", "delta_I must lie in [0, 1]");
    c.require(p.w_EE >= 0.0 && finite(p.w_EE), "params.w_EE", "w_EE must be >= 0");
    c.require(p.w_EI >= 0.0 && finite(p.w_EI), "params.w_EI", "w_EI must be >= 0");
    c.require(p.w_IE >= 0.0 && finite(p.w_IE), "params.w_IE", "w_IE must be >= 0");
    c.require(p.w_II >= 0.0 && finite(p.w_II), "params.w_II", "w_II must be >= 0");
    c.require(p.sigma_ext_E >= 0.0 && finite(p.sigma_ext_E), "params.sigma_ext_E", "sigma_ext_E must be >= 0");
    c.require(p.sigma_ext_I >= 0.0 && finite(p.sigma_ext_I), "params.sigma_ext_I", "sigma_ext_I must be >= 0");
    c.require(finite(p.theta_E), "params.theta_E", "theta_E must be finite");
    c.require(finite(p.theta_I), "params.theta_I", "theta_I must be finite");
    c.require(finite(p.I_ext_E), "params.I_ext_E", "I_ext_E must be finite");
    c.require(finite(p.I_ext_I), "params.I_ext_I", "I_ext_I must be finite");

    c.require(d.ou.gamma > 0.0 && finite(d.ou.gamma), "ou.gamma", "gamma must be positive");
    c.require(d.ou.sigma >= 0.0 && finite(d.ou.sigma), "ou.sigma", "sigma must be >= 0");
    c.require(finite(d.ou.mu), "ou.mu", "mu must be finite");
    c.require(finite(d.ou.v0), "ou.v0", "v0 must be finite");

    const auto& j = d.jumps;
    for (const auto& [key, value] : {std::pair{"jumps.intensity_E", j.intensity_E},
                                     std::pair{"jumps.intensity_I", j.intensity_I}}) {
        if (value) {
            c.require(*value >= 0.0 && finite(*value), key, "jump intensity must be >= 0");
            c.require(*value == 0.0 || uses_jumps(d.mode), key,
                      "jump intensity > 0 requires scenario mode ou_reflected_jumps",
                      ConfigErrorCode::contradiction);
        }
    }
    c.require(finite(j.size_value), "jumps.size_value", "size_value must be finite");
    c.require(j.size_mean > 0.0 && finite(j.size_mean), "jumps.size_mean", "size_mean must be positive");
    c.require(finite(j.size_lo) && finite(j.size_hi) && j.size_lo < j.size_hi, "jumps.size_hi",
              "uniform jump sizes need size_lo < size_hi");
    c.require(finite(j.rho_E), "jumps.rho_E", "rho_E must be finite");
    c.require(finite(j.rho_I), "jumps.rho_I", "rho_I must be finite");

    const auto& e = d.engine;
    c.require(e.horizon > 0.0 && finite(e.horizon), "engine.horizon", "horizon must be positive");
    c.require(e.dt > 0.0 && finite(e.dt), "engine.dt", "dt must be positive");
    if (e.horizon > 0.0 && e.dt > 0.0 && finite(e.horizon) && finite(e.dt) && !e.level) {
        c.require(is_integer_multiple(e.horizon, e.dt), "engine.dt", "horizon must be an integer multiple of dt");
    }
    if (e.level) {
        c.require(*e.level >= 1 && *e.level <= SimulationGrid::kMaxDyadicLevel, "engine.level",
                  "dyadic level must lie in [1, 30]");
    }
    c.require(e.paths >= 1, "engine.paths", "paths must be >= 1");
    c.require(!d.output.dir.empty(), "output.dir", "output directory must not be empty");

    if (d.experiment) {
        const auto& x = *d.experiment;
        bool decreasing = !x.offsets.empty();
        for (std::size_t k = 0; k < x.offsets.size(); ++k) {
            decreasing = decreasing && x.offsets[k] >= 0.0 && (k == 0 || x.offsets[k] < x.offsets[k - 1]);
        }
        c.require(decreasing, "experiment.offsets", "offsets must be non-empty, >= 0 and strictly decreasing");
        bool increasing = !x.levels.empty();
        for (std::size_t k = 0; k < x.levels.size(); ++k) {
            increasing = increasing && x.levels[k] >= 1 && (k == 0 || x.levels[k] > x.levels[k - 1]);
        }
        c.require(increasing, "experiment.levels", "levels must be non-empty, >= 1 and strictly increasing");
        c.require(x.reference_offset >= 1, "experiment.reference_offset", "reference_offset must be >= 1");
        if (increasing && x.reference_offset >= 1) {
            c.require(x.levels.back() + x.reference_offset <= SimulationGrid::kMaxDyadicLevel,
                      "experiment.levels", "reference level exceeds 30");
        }
        c.require(x.paths >= 1, "experiment.paths", "paths must be >= 1");
        c.require(x.horizon > 0.0 && finite(x.horizon), "experiment.horizon", "horizon must be positive");
        c.require(x.dt > 0.0 && finite(x.dt) && x.horizon > 0.0 && is_integer_multiple(x.horizon, x.dt),
                  "experiment.dt", "dt must be positive and divide the horizon");
        c.require(x.linear_sigma >= 0.0 && finite(x.linear_sigma), "experiment.linear_sigma",
                  "linear_sigma must be >= 0");
    }
}

const std::vector<std::string>& section_order() {
    static const std::vector<std::string> order{"scenario", "params", "ou",        "jumps",
                                                "engine",   "output", "experiment"};
    return order;
}

}  // namespace

std::string_view to_string(ConfigErrorCode code) {
    switch (code) {
        case ConfigErrorCode::syntax:
            return "syntax";
        case ConfigErrorCode::unknown_section:
            return "unknown_section";
        case ConfigErrorCode::unknown_key:
            return "unknown_key";
        case ConfigErrorCode::duplicate_key:
            return "duplicate_key";
        case ConfigErrorCode::type_mismatch:
            return "type_mismatch";
        case ConfigErrorCode::invariant_violation:
            return "invariant_violation";
        case ConfigErrorCode::contradiction:
            return "contradiction";
    }
    return "unknown";
}

namespace {

std::string describe(const std::vector<ConfigIssue>& issues) {
    std::ostringstream os;
    os << "invalid configuration (" << issues.size() << (issues.size() == 1 ? " problem)" : " problems)");
    for (const auto& i : issues) {
        os << "\n  ";
        if (i.line) {
            os << "line " << i.line << ": ";
        }
        os << "[" << to_string(i.code) << "] ";
        if (!i.key.empty()) {
            os << i.key << ": ";
        }
        os << i.message;
    }
    return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(describe(issues)), issues_(std::move(issues)) {}

SimulationGrid EngineSection::grid() const {
    if (level) {
        return SimulationGrid::dyadic(*level, horizon);
    }
    return SimulationGrid::uniform(dt, horizon);
}

ScenarioConfig ConfigDocument::scenario() const {
    ScenarioConfig s;
    s.mode = mode;
    s.params = params;
    s.ou = ou;
    s.x0 = {x0_E, x0_I};
    s.jump_response = {jumps.rho_E, jumps.rho_I};
    JumpDistribution dist;
    switch (jumps.family) {
        case JumpSizeFamily::constant:
            dist = ConstantJump{jumps.size_value};
            break;
        case JumpSizeFamily::exponential:
            dist = ExponentialJump{jumps.size_mean};
            break;
        case JumpSizeFamily::uniform:
            dist = UniformJump{jumps.size_lo, jumps.size_hi};
            break;
    }
    const double fallback = uses_jumps(mode) ? kDefaultJumpIntensity : 0.0;
    s.jumps = {CompoundPoissonSpec{jumps.intensity_E.value_or(fallback), dist},
               CompoundPoissonSpec{jumps.intensity_I.value_or(fallback), dist}};
    return s;
}

ConfigDocument parse_config(std::string_view text) {
    ConfigDocument doc;
    std::vector<ConfigIssue> issues;
    std::map<std::string, std::size_t> lines;  // "section.key" -> line
    std::string section;
    bool section_known = true;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view raw = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        const auto line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                issues.push_back({ConfigErrorCode::syntax, line_no, "", "unterminated section header"});
                continue;
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            const auto& known = section_order();
            section_known = std::find(known.begin(), known.end(), section) != known.end();
            if (!section_known) {
                issues.push_back({ConfigErrorCode::unknown_section, line_no, section, "unknown section"});
            } else if (section == "experiment") {
                experiment_of(doc);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            issues.push_back({ConfigErrorCode::syntax, line_no, "", "expected 'key = value'"});
            continue;
        }
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        if (section.empty()) {
            issues.push_back({ConfigErrorCode::syntax, line_no, key, "key outside of a section"});
            continue;
        }
        if (!section_known) {
            continue;
        }
        const std::string full = section + "." + key;
        const auto& table = key_table();
        const auto it = std::find_if(table.begin(), table.end(),
                                     [&](const KeySpec& k) { return k.section == section && k.key == key; });
        if (it == table.end()) {
            issues.push_back({ConfigErrorCode::unknown_key, line_no, full, "unknown key"});
            continue;
        }
        if (lines.count(full)) {
            issues.push_back({ConfigErrorCode::duplicate_key, line_no, full,
                              "duplicate key (first set on line " + std::to_string(lines[full]) + ")"});
            continue;
        }
        lines[full] = line_no;
        if (auto err = it->set(doc, value)) {
            issues.push_back({ConfigErrorCode::type_mismatch, line_no, full, *err + ", got '" + std::string(value) + "'"});
        }
    }

    check_invariants(doc, lines, issues);
    if (!issues.empty()) {
        throw ConfigError(std::move(issues));
    }
    return doc;
}

ConfigDocument load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError({{ConfigErrorCode::syntax, 0, "", "cannot read config file '" + path + "'"}});
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const ConfigDocument& doc) {
    std::string out;
    for (const auto& section : section_order()) {
        if (section == "experiment" && !doc.experiment) {
            continue;
        }
        out += "[" + section + "]\n";
        for (const auto& k : key_table()) {
            if (k.section != section) {
                continue;
            }
            if (auto v = k.get(doc)) {
                out += k.key + " = " + *v + "\n";
            }
        }
        out += "\n";
    }
    return out;
}

}  // namespace rsde
