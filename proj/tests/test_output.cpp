#include <doctest.h>

#include <charconv>
#include <sstream>

#include "rsde/models.hpp"
#include "rsde/output.hpp"
#include "rsde/wilson_cowan.hpp"

using namespace rsde;

namespace {

// Three grid points by hand: E goes 0 -> 0.5 -> 0.25, I sits on the barrier
// and is pushed by 0.1 in the second step.
TrajectoryBundle hand_bundle() {
    TrajectoryBundle b;
    b.grid = SimulationGrid::dyadic(1, 1.0);
    b.times = {0.0, 0.5, 1.0};
    b.states = {{0.0, 0.5, 0.25}, {0.0, 0.0, 0.0}};
    b.phi_lower = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.1}};
    b.phi_upper = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
    b.jump_total = {{0.0, 0.3, 0.3}, {0.0, 0.0, 0.0}};
    b.jump_count = {{0, 1, 1}, {0, 0, 0}};
    b.seed = SeedSpec{5, 2, 0};
    return b;
}

}  // namespace

TEST_CASE("summary of a zero-dynamics bundle") {
    const auto m = make_zero_model(2, {0.4, 0.2});
    const auto b = simulate_trajectory(m, SimulationGrid::uniform(0.1, 2.0), SeedSpec{1, 0, 0});
    const auto s = summarize(b);
    CHECK(s["max_rate"][0]["value"] == 0.4);
    CHECK(s["max_rate"][0]["time"] == 0.0);
    CHECK(s["max_rate"][1]["value"] == 0.2);
    CHECK(s["local_time"][0] == 0.0);
    CHECK(s["local_time"][1] == 0.0);
    CHECK(s["schema_version"] == kSchemaVersion);
}

TEST_CASE("summary of a hand-built bundle") {
    const auto s = summarize(hand_bundle());
    CHECK(s["terminal"]["t"] == 1.0);
    CHECK(s["terminal"]["state"][0] == 0.25);
    CHECK(s["max_rate"][0]["value"] == 0.5);
    CHECK(s["max_rate"][0]["time"] == 0.5);
    CHECK(s["local_time"][1] == 0.1);
    CHECK(s["jumps"]["count"][0] == 1);
    CHECK(s["jumps"]["total"][0] == 0.3);
    CHECK(s["seed"]["master"] == 5);
    CHECK(s["seed"]["stream"] == 2);
    CHECK(s["seminorms"]["sup_norm"] == 0.5);
    // |0.5 - 0| / 0.5^(1/2) beats the other two pairs
    CHECK(s["seminorms"]["holder"]["value"].get<double>() == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("summary is reproducible") {
    const auto m = make_scenario(ScenarioConfig{});
    const auto grid = SimulationGrid::uniform(0.1, 100.0);
    const auto a = summarize(simulate_trajectory(m, grid, SeedSpec{42, 0, 0}));
    const auto b = summarize(simulate_trajectory(m, grid, SeedSpec{42, 0, 0}));
    CHECK(a.dump() == b.dump());
}

TEST_CASE("trajectory CSV layout and numeric fidelity") {
    const auto m = make_scenario(ScenarioConfig{});
    const auto b = simulate_trajectory(m, SimulationGrid::uniform(0.1, 10.0), SeedSpec{42, 0, 0});
    std::istringstream in(trajectory_csv(b));
    std::string line;
    std::getline(in, line);
    CHECK(line == kTrajectoryHeader);
    std::size_t row = 0;
    double last_t = -1.0;
    while (std::getline(in, line)) {
        std::vector<double> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const auto field = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            double v = 0.0;
            std::from_chars(field.data(), field.data() + field.size(), v);
            fields.push_back(v);
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        REQUIRE(fields.size() == 7);
        CHECK(fields[0] > last_t);
        last_t = fields[0];
        CHECK(fields[0] == b.times[row]);
        CHECK(fields[1] == b.states[0][row]);
        CHECK(fields[2] == b.states[1][row]);
        CHECK(fields[3] == b.reflected(0).phi[row]);
        CHECK(fields[5] == b.jump_count[0][row]);
        ++row;
    }
    CHECK(row == b.points());
}

TEST_CASE("17 significant digits") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(0.0) == "0");
    CHECK(format_real(100.0) == "100");
}

TEST_CASE("unwritable paths raise an output error") {
    const auto dir = std::filesystem::temp_directory_path() / "rsde_output_test";
    std::filesystem::create_directories(dir);
    write_file(dir / "plain", "x");
    CHECK_THROWS_AS(write_file(dir / "plain" / "nested.csv", "y"), OutputError);
    std::filesystem::remove_all(dir);
}
