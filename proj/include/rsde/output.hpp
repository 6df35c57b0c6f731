#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rsde/engine.hpp"
#include "rsde/ensemble.hpp"

namespace rsde {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kTrajectoryHeader = "t,r_E,r_I,phi_E,phi_I,jump_count_E,jump_count_I";
inline constexpr std::string_view kLongHeader = "scenario,path,t,population,rate";

/// I/O failure carrying the offending path.
class OutputError : public std::runtime_error {
public:
    OutputError(const std::filesystem::path& path, const std::string& what);
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

/// 17 significant digits, so that parsing the text gives back the same double.
std::string format_real(double v);

/// Two-population trajectory as CSV (header plus one row per grid point).
/// phi is the net reflection term of each coordinate. Throws
/// std::invalid_argument for a bundle that is not two-dimensional.
void write_trajectory_csv(std::ostream& out, const TrajectoryBundle& bundle);
std::string trajectory_csv(const TrajectoryBundle& bundle);

/// Rows of the long-format plot table (no header).
void write_long_rows(std::ostream& out, std::string_view scenario, std::size_t path, const TrajectoryBundle& bundle);

/// Terminal state, maximal rates and their times, reflection local time,
/// jump counts and totals, seminorms of the path and the seed lineage.
nlohmann::json summarize(const TrajectoryBundle& bundle);

/// Ensemble-level statistics (no per-time arrays).
nlohmann::json summarize(const EnsembleStats& stats);

/// Writes a file, creating parent directories. Throws OutputError.
void write_file(const std::filesystem::path& path, std::string_view content);

/// Pretty JSON with a trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace rsde
