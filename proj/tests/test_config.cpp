#include <doctest.h>

#include <algorithm>

#include "rsde/config.hpp"

using namespace rsde;

namespace {

bool has_issue(const ConfigError& e, ConfigErrorCode code, const std::string& key, std::size_t line) {
    return std::any_of(e.issues().begin(), e.issues().end(), [&](const ConfigIssue& i) {
        return i.code == code && i.key == key && i.line == line;
    });
}

ConfigError error_of(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected a configuration error");
    return ConfigError({});
}

}  // namespace

TEST_CASE("empty document gives the defaults") {
    const auto d = parse_config("");
    CHECK(d.mode == InputMode::ou_reflected_jumps);
    CHECK(d.params == WilsonCowanParams{});
    CHECK(d.params.w_IE == 13.0);
    CHECK(d.engine.horizon == 100.0);
    CHECK(d.engine.dt == 0.1);
    CHECK(d.engine.seed == 42);
    CHECK(d.engine.grid().points() == 1001);
    CHECK(!d.experiment);
    const auto s = d.scenario();
    CHECK(s.jumps[0].intensity == kDefaultJumpIntensity);
}

TEST_CASE("negative time constant is an invariant violation") {
    const auto e = error_of("[params]\ntau_E = -1\n");
    CHECK(has_issue(e, ConfigErrorCode::invariant_violation, "params.tau_E", 2));
    CHECK(std::string(e.what()).find("positive") != std::string::npos);
}

TEST_CASE("jumps in the white-noise scenario are a contradiction") {
    const auto e = error_of("[scenario]\nmode = white_noise\n[jumps]\nintensity_E = 0.5\n");
    CHECK(has_issue(e, ConfigErrorCode::contradiction, "jumps.intensity_E", 4));
    // unset intensities fall back to zero outside the jump scenario
    const auto d = parse_config("[scenario]\nmode = white_noise\n");
    CHECK(d.scenario().jumps[0].intensity == 0.0);
}

TEST_CASE("distinct codes for distinct problems") {
    const auto e = error_of(
        "[scenario]\n"
        "colour = blue\n"
        "[params]\n"
        "tau_I = fast\n"
        "tau_I = 2\n"
        "[extra]\n"
        "nonsense line\n");
    CHECK(has_issue(e, ConfigErrorCode::unknown_key, "scenario.colour", 2));
    CHECK(has_issue(e, ConfigErrorCode::type_mismatch, "params.tau_I", 4));
    CHECK(has_issue(e, ConfigErrorCode::duplicate_key, "params.tau_I", 5));
    CHECK(has_issue(e, ConfigErrorCode::unknown_section, "extra", 6));
    CHECK(has_issue(e, ConfigErrorCode::syntax, "", 7));
    CHECK(e.issues().size() == 5);

    const auto s = error_of("[engine\n");
    CHECK(s.issues().front().code == ConfigErrorCode::syntax);
    CHECK(error_of("horizon = 3\n").issues().front().code == ConfigErrorCode::syntax);
}

TEST_CASE("engine and experiment invariants") {
    CHECK(has_issue(error_of("[engine]\nhorizon = 1\ndt = 0.3\n"), ConfigErrorCode::invariant_violation, "engine.dt", 3));
    CHECK(has_issue(error_of("[engine]\nlevel = 40\n"), ConfigErrorCode::invariant_violation, "engine.level", 2));
    CHECK(has_issue(error_of("[experiment]\noffsets = 0.01, 0.1\n"), ConfigErrorCode::invariant_violation,
                    "experiment.offsets", 2));
    CHECK(has_issue(error_of("[scenario]\nmode = ou_reflected\nx0_E = -0.5\n"),
                    ConfigErrorCode::invariant_violation, "scenario.x0_E", 3));
    CHECK_NOTHROW(parse_config("[scenario]\nmode = ou_current\nx0_E = -0.5\n"));
}

TEST_CASE("comments, whitespace and lists") {
    const auto d = parse_config(
        "# leading comment\n"
        "  [engine]   \n"
        "  seed=7   # trailing comment\n"
        "level = 6\n"
        "[experiment]\n"
        "kind = convergence\n"
        "levels = 3, 4,5\n");
    CHECK(d.engine.seed == 7);
    CHECK(d.engine.grid().steps() == 64);
    REQUIRE(d.experiment);
    CHECK(d.experiment->kind == ExperimentKind::convergence);
    CHECK(d.experiment->levels == std::vector<int>{3, 4, 5});
}

TEST_CASE("canonical text round-trips") {
    CHECK(parse_config(emit_config(parse_config(""))) == parse_config(""));

    const auto d = parse_config(
        "[scenario]\nmode = ou_reflected\nx0_E = 0.1\nx0_I = 0.30000000000000004\n"
        "[params]\nw_EE = 12.5\nsigma_ext_E = 0.123456789012345\n"
        "[jumps]\nintensity_E = 0\nsize_dist = uniform\nsize_lo = 0.25\nsize_hi = 0.75\n"
        "[engine]\nlevel = 9\nhorizon = 20\nseed = 18446744073709551615\npaths = 12\njump_timing = split\n"
        "[output]\ndir = results/run one\nretain = 3\n"
        "[experiment]\nkind = stability\nmodel = linear\noffsets = 0.5, 1e-3\nlevels = 2, 7\n"
        "paths = 5\nhorizon = 3\ndt = 0.25\nlinear_sigma = 0.2\n");
    const auto text = emit_config(d);
    CHECK(parse_config(text) == d);
    CHECK(emit_config(parse_config(text)) == text);
}
