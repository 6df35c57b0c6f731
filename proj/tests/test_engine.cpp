#include <doctest.h>

#include <cmath>
#include <limits>

#include "rsde/engine.hpp"
#include "rsde/models.hpp"

using namespace rsde;

namespace {

ReflectedJumpSDE constant_model(std::size_t d, double f, double g, ReflectionDomain domain, std::vector<double> x0) {
    ReflectedJumpSDE m;
    m.dimension = d;
    m.drift = [f](std::span<const double>, double, std::span<double> out) {
        for (double& v : out) {
            v = f;
        }
    };
    m.diffusion = [g](std::span<const double>, double, std::span<double> out) {
        for (double& v : out) {
            v = g;
        }
    };
    m.domain = std::move(domain);
    m.x0 = std::move(x0);
    return m;
}

}  // namespace

TEST_CASE("euler step with zero dynamics keeps the state") {
    const auto m = make_zero_model(2, {0.3, 0.7});
    const std::vector<double> x{0.3, 0.7}, dW{0.5, -0.2};
    const auto r = euler_step(m, x, dW, {}, 0.1);
    CHECK(r.state == x);
}

TEST_CASE("euler step reflects a negative proposal") {
    const auto m = constant_model(1, -1.0, 0.0, ReflectionDomain::orthant(1), {0.0});
    const std::vector<double> x{0.0}, dW{0.0};
    const auto r = euler_step(m, x, dW, {}, 0.1);
    CHECK(r.state[0] == 0.0);
    CHECK(r.phi_lower[0] == doctest::Approx(0.1));
}

TEST_CASE("euler step adds jumps with the frozen response") {
    auto m = constant_model(1, 0.0, 0.0, ReflectionDomain::orthant(1), {0.5});
    m.jump_specs = {CompoundPoissonSpec{1.0, ConstantJump{2.0}}};
    m.jump_coefficient = [](std::span<const double>, std::span<double> out) { out[0] = 1.0; };
    const std::vector<double> x{0.5}, dW{0.0};
    const std::vector<JumpEvent> jumps{{0.05, 2.0, 0}};
    const auto r = euler_step(m, x, dW, jumps, 0.1);
    CHECK(r.state[0] == 2.5);
    CHECK(r.jump_amounts == std::vector<double>{2.0});
}

TEST_CASE("zero dynamics give a constant path") {
    const auto m = make_zero_model(2, {1.0, 2.0});
    const auto grid = SimulationGrid::uniform(0.1, 5.0);
    const auto b = simulate_trajectory(m, grid, SeedSpec{1, 0, 0});
    for (std::size_t k = 0; k < b.points(); ++k) {
        CHECK(b.states[0][k] == 1.0);
        CHECK(b.states[1][k] == 2.0);
        CHECK(b.phi_lower[0][k] == 0.0);
    }
}

TEST_CASE("pure drift hits the barrier and sticks") {
    const auto m = constant_model(2, -1.0, 0.0, ReflectionDomain::orthant(2), {1.0, 1.0});
    const auto grid = SimulationGrid::dyadic(10, 2.0);
    const auto b = simulate_trajectory(m, grid, SeedSpec{1, 0, 0});
    for (std::size_t k = 0; k < b.points(); ++k) {
        const double t = b.times[k];
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(b.states[i][k] == doctest::Approx(std::max(0.0, 1.0 - t)).epsilon(1e-12).scale(1.0));
            CHECK(b.reflected(i).phi[k] == doctest::Approx(std::max(0.0, t - 1.0)).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("same seed gives the same bundle") {
    const auto m = make_linear_model(2, 1.0, 0.3, {0.0, 0.0});
    const auto grid = SimulationGrid::uniform(0.05, 3.0);
    const auto a = simulate_trajectory(m, grid, SeedSpec{5, 2, 0});
    const auto b = simulate_trajectory(m, grid, SeedSpec{5, 2, 0});
    CHECK(a == b);
    CHECK(a.seed == SeedSpec{5, 2, 0});
    const auto c = simulate_trajectory(m, grid, SeedSpec{5, 3, 0});
    CHECK(!(a == c));
}

TEST_CASE("coefficients are frozen at the left endpoint") {
    // drift records the state it was evaluated at
    std::vector<double> seen;
    ReflectedJumpSDE m;
    m.dimension = 1;
    m.drift = [&seen](std::span<const double> x, double, std::span<double> out) {
        seen.push_back(x[0]);
        out[0] = 1.0;
    };
    m.diffusion = [](std::span<const double>, double, std::span<double> out) { out[0] = 0.0; };
    m.domain = ReflectionDomain::orthant(1);
    m.x0 = {0.0};
    const auto grid = SimulationGrid::dyadic(3, 1.0);
    const auto b = simulate_trajectory(m, grid, SeedSpec{1, 0, 0});
    REQUIRE(seen.size() == grid.steps());
    for (std::size_t k = 0; k < grid.steps(); ++k) {
        CHECK(seen[k] == b.states[0][k]);
    }
}

TEST_CASE("jump bookkeeping reconstructs the path") {
    auto m = constant_model(2, 0.0, 0.0, ReflectionDomain::orthant(2), {0.0, 0.0});
    m.jump_specs = {CompoundPoissonSpec{3.0, ExponentialJump{1.0}}, CompoundPoissonSpec{1.0, UniformJump{0.0, 2.0}}};
    m.jump_coefficient = [](std::span<const double>, std::span<double> out) {
        out[0] = 0.5;
        out[1] = 2.0;
    };
    const auto grid = SimulationGrid::uniform(0.1, 10.0);
    const auto noise = sample_noise(m, grid, 8, 0);
    const auto b = integrate(m, grid, noise);
    REQUIRE(b.jumps.size() == noise.jumps.size());
    REQUIRE(!b.jumps.empty());
    for (std::size_t i = 0; i < 2; ++i) {
        double total = 0.0;
        std::uint32_t count = 0;
        for (const auto& r : b.jumps) {
            if (r.event.component == i) {
                total += r.amount;
                ++count;
                CHECK(r.event.time > b.times[r.step] - 1e-12);
                CHECK(r.event.time <= b.times[r.step + 1]);
            }
        }
        CHECK(b.jump_count[i].back() == count);
        CHECK(b.jump_total[i].back() == doctest::Approx(total));
        // no drift, no noise, only upward jumps: X = x0 + J
        CHECK(b.states[i].back() == doctest::Approx(total));
    }
}

TEST_CASE("non-finite coefficients abort the run") {
    auto m = constant_model(1, std::numeric_limits<double>::quiet_NaN(), 0.0, ReflectionDomain::orthant(1), {0.0});
    const auto grid = SimulationGrid::uniform(0.1, 1.0);
    CHECK_THROWS_AS(simulate_trajectory(m, grid, SeedSpec{1, 0, 0}), SimulationAbort);
    auto huge = constant_model(1, 1e308, 0.0, ReflectionDomain::unconstrained(1), {1e308});
    try {
        simulate_trajectory(huge, SimulationGrid::uniform(1.0, 10.0), SeedSpec{1, 0, 0});
        FAIL("expected an abort");
    } catch (const SimulationAbort& e) {
        CHECK(e.step() == 0);
    }
}

TEST_CASE("initial state outside the domain is rejected") {
    auto m = constant_model(1, 0.0, 0.0, ReflectionDomain::orthant(1), {-1.0});
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("split jump timing") {
    auto m = constant_model(2, -0.5, 0.2, ReflectionDomain::orthant(2), {0.2, 0.2});
    m.jump_specs = {CompoundPoissonSpec{2.0, ConstantJump{0.5}}, CompoundPoissonSpec{2.0, ConstantJump{0.5}}};
    m.jump_coefficient = [](std::span<const double>, std::span<double> out) {
        out[0] = 1.0;
        out[1] = 1.0;
    };
    const auto grid = SimulationGrid::uniform(0.1, 10.0);
    EngineOptions split;
    split.jump_timing = JumpTiming::split;
    const auto a = simulate_trajectory(m, grid, SeedSpec{4, 0, 0}, split);
    const auto b = simulate_trajectory(m, grid, SeedSpec{4, 0, 0}, split);
    const auto e = simulate_trajectory(m, grid, SeedSpec{4, 0, 0});
    CHECK(a == b);
    CHECK(a.jumps.size() == e.jumps.size());
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(a.jump_count[i].back() == e.jump_count[i].back());
        for (double x : a.states[i]) {
            CHECK(x >= 0.0);
        }
    }
}

TEST_CASE("coarsened noise sums the fine increments") {
    const auto m = make_linear_model(1, 1.0, 1.0, {0.0});
    const auto fine = SimulationGrid::dyadic(6, 1.0);
    const auto noise = sample_noise(m, fine, 3, 0);
    const auto coarse = coarsen(noise, 8);
    REQUIRE(coarse.dW[0].size() == 8);
    double fine_sum = 0.0, coarse_sum = 0.0;
    for (double v : noise.dW[0]) {
        fine_sum += v;
    }
    for (double v : coarse.dW[0]) {
        coarse_sum += v;
    }
    CHECK(coarse_sum == doctest::Approx(fine_sum));
    CHECK_THROWS(coarsen(noise, 5));
}
