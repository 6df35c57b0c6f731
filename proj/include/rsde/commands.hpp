#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>

#include "rsde/config.hpp"

namespace rsde {

/// Command line misuse (missing section, bad flag value). Exit status 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

/// Ensemble of the configured scenario. Writes trajectory_<p>.csv for each
/// retained path, summary.json and panel_long.csv into `out`.
void run_scenario(const ConfigDocument& doc, const std::filesystem::path& out);

/// All four input modes with one master seed, each in its own subdirectory,
/// plus panels_long.csv over all modes. Jump settings only apply to the jump
/// mode.
void run_panels(const ConfigDocument& doc, const std::filesystem::path& out);

/// Stability or convergence sweep from the experiment section; writes
/// stability.json or convergence.json. Throws UsageError when the section is
/// missing or names the other kind.
void run_experiment(const ConfigDocument& doc, ExperimentKind kind, const std::filesystem::path& out);

/// Lipschitz estimates of drift, diffusion and gain, and the jump response
/// bound; writes validation.json.
void run_validate(const ConfigDocument& doc, const std::filesystem::path& out);

/// Entry point of the `rsde` tool. Returns the exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rsde
