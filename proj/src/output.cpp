#include "rsde/output.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "rsde/analysis.hpp"

namespace rsde {

OutputError::OutputError(const std::filesystem::path& path, const std::string& what)
    : std::runtime_error(path.string() + ": " + what), path_(path) {}

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryBundle& bundle) {
    if (bundle.dimension() != 2) {
        throw std::invalid_argument("trajectory CSV needs a two-population bundle");
    }
    const auto e = bundle.reflected(0);
    const auto i = bundle.reflected(1);
    out << kTrajectoryHeader << '\n';
    for (std::size_t k = 0; k < bundle.points(); ++k) {
        out << format_real(bundle.times[k]) << ',' << format_real(bundle.states[0][k]) << ','
            << format_real(bundle.states[1][k]) << ',' << format_real(e.phi[k]) << ',' << format_real(i.phi[k]) << ','
            << bundle.jump_count[0][k] << ',' << bundle.jump_count[1][k] << '\n';
    }
}

std::string trajectory_csv(const TrajectoryBundle& bundle) {
    std::ostringstream os;
    write_trajectory_csv(os, bundle);
    return os.str();
}

void write_long_rows(std::ostream& out, std::string_view scenario, std::size_t path, const TrajectoryBundle& bundle) {
    static constexpr std::string_view names[] = {"E", "I"};
    for (std::size_t c = 0; c < bundle.dimension(); ++c) {
        const std::string name = c < 2 ? std::string(names[c]) : "x" + std::to_string(c);
        for (std::size_t k = 0; k < bundle.points(); ++k) {
            out << scenario << ',' << path << ',' << format_real(bundle.times[k]) << ',' << name << ','
                << format_real(bundle.states[c][k]) << '\n';
        }
    }
}

nlohmann::json summarize(const TrajectoryBundle& bundle) {
    using nlohmann::json;
    json j;
    j["schema_version"] = kSchemaVersion;
    j["seed"] = {{"master", bundle.seed.master_seed}, {"stream", bundle.seed.stream_index}};
    j["grid"] = {{"mode", bundle.grid.mode() == SimulationGrid::Mode::dyadic ? "dyadic" : "uniform"},
                 {"horizon", bundle.grid.horizon()},
                 {"steps", bundle.grid.steps()},
                 {"dt", bundle.grid.dt()}};
    if (bundle.points() == 0) {
        return j;
    }
    const std::size_t last = bundle.points() - 1;
    json terminal = json::array(), max_rate = json::array(), local_time = json::array();
    json jump_counts = json::array(), jump_totals = json::array();
    for (std::size_t c = 0; c < bundle.dimension(); ++c) {
        const auto& x = bundle.states[c];
        terminal.push_back(x[last]);
        // first time the maximum is attained
        const auto it = std::max_element(x.begin(), x.end());
        max_rate.push_back({{"value", *it}, {"time", bundle.times[static_cast<std::size_t>(it - x.begin())]}});
        local_time.push_back(bundle.phi_lower[c][last] + bundle.phi_upper[c][last]);
        jump_counts.push_back(bundle.jump_count[c][last]);
        jump_totals.push_back(bundle.jump_total[c][last]);
    }
    j["terminal"] = {{"t", bundle.times[last]}, {"state", terminal}};
    j["max_rate"] = max_rate;
    j["local_time"] = local_time;
    j["jumps"] = {{"count", jump_counts}, {"total", jump_totals}};
    const auto s = seminorm_report(path_of(bundle));
    j["seminorms"] = {{"sup_norm", s.sup_norm},
                      {"holder", {{"alpha", s.holder_alpha}, {"value", s.holder_seminorm}}},
                      {"sobolev", {{"alpha", s.sobolev_alpha}, {"p", s.sobolev_p}, {"value", s.sobolev_seminorm}}}};
    return j;
}

nlohmann::json summarize(const EnsembleStats& stats) {
    using nlohmann::json;
    json j;
    j["n_paths"] = stats.n_paths;
    j["mean_path_max"] = stats.mean_path_max;
    if (!stats.times.empty()) {
        const std::size_t last = stats.times.size() - 1;
        json mean = json::array(), var = json::array();
        for (std::size_t c = 0; c < stats.mean.size(); ++c) {
            mean.push_back(stats.mean[c][last]);
            var.push_back(stats.variance[c][last]);
        }
        j["terminal"] = {{"t", stats.times[last]}, {"mean", mean}, {"variance", var}};
    }
    return j;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw OutputError(path.parent_path(), "cannot create directory: " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw OutputError(path, "cannot open for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
        throw OutputError(path, "write failed");
    }
}

std::string dump_json(const nlohmann::json& j) {
    return j.dump(2) + "\n";
}

}  // namespace rsde
