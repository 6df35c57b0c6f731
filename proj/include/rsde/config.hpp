#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rsde/engine.hpp"
#include "rsde/wilson_cowan.hpp"

namespace rsde {

enum class ConfigErrorCode {
    syntax,               // malformed line
    unknown_section,
    unknown_key,
    duplicate_key,
    type_mismatch,        // value does not parse as the key's type
    invariant_violation,  // parses but violates a parameter invariant
    contradiction,        // settings that cannot hold together
};

std::string_view to_string(ConfigErrorCode code);

struct ConfigIssue {
    ConfigErrorCode code;
    std::size_t line = 0;  // 1-based; 0 when not tied to a line
    std::string key;       // "section.key"
    std::string message;
};

/// Itemised parse/validation failure.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

enum class JumpSizeFamily { constant, exponential, uniform };

struct JumpSection {
    std::optional<double> intensity_E;  // unset: default for the jump scenario, 0 otherwise
    std::optional<double> intensity_I;
    JumpSizeFamily family = JumpSizeFamily::exponential;
    double size_value = 1.0;  // constant
    double size_mean = kDefaultJumpMean;  // exponential
    double size_lo = 0.0;     // uniform
    double size_hi = 1.0;
    double rho_E = kDefaultJumpResponse;
    double rho_I = kDefaultJumpResponse;

    friend bool operator==(const JumpSection&, const JumpSection&) = default;
};

struct EngineSection {
    double horizon = 100.0;          // ms
    double dt = 0.1;                 // ms, uniform grid
    std::optional<int> level;        // dyadic level; overrides dt when set
    std::uint64_t seed = 42;
    std::size_t paths = 1;
    JumpTiming jump_timing = JumpTiming::end_of_step;

    SimulationGrid grid() const;
    friend bool operator==(const EngineSection&, const EngineSection&) = default;
};

struct OutputSection {
    std::string dir = "out";
    std::size_t retain = 1;  // full trajectories written as CSV

    friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

enum class ExperimentKind { stability, convergence };
enum class ExperimentModel { scenario, linear, zero };

struct ExperimentSection {
    ExperimentKind kind = ExperimentKind::stability;
    ExperimentModel model = ExperimentModel::scenario;
    std::vector<double> offsets{1e-1, 1e-2, 1e-3};
    std::vector<int> levels{4, 5, 6, 7, 8, 9};
    int reference_offset = 3;
    std::size_t paths = 1000;
    double horizon = 20.0;
    double dt = 0.1;  // stability grid
    double linear_sigma = 0.1;

    friend bool operator==(const ExperimentSection&, const ExperimentSection&) = default;
};

/// Parsed configuration document.
struct ConfigDocument {
    InputMode mode = InputMode::ou_reflected_jumps;
    double x0_E = 0.0;
    double x0_I = 0.0;
    WilsonCowanParams params;
    OUParams ou{0.0, 1.0, 0.1, 0.0};
    JumpSection jumps;
    EngineSection engine;
    OutputSection output;
    std::optional<ExperimentSection> experiment;

    ScenarioConfig scenario() const;
    friend bool operator==(const ConfigDocument&, const ConfigDocument&) = default;
};

/// Parses the sectioned key/value format:
///
///     # comment
///     [section]
///     key = value
///
/// Sections: scenario, params, ou, jumps, engine, output, experiment. Unknown
/// sections/keys are rejected. All problems are collected and thrown together
/// as a ConfigError.
ConfigDocument parse_config(std::string_view text);

/// Reads and parses a file; an unreadable file is a ConfigError as well.
ConfigDocument load_config(const std::string& path);

/// Canonical text form; parse_config(emit_config(doc)) == doc.
std::string emit_config(const ConfigDocument& doc);

}  // namespace rsde
