#include <doctest.h>

#include <cmath>

#include <omp.h>

#include "rsde/ensemble.hpp"
#include "rsde/models.hpp"
#include "rsde/wilson_cowan.hpp"

using namespace rsde;

TEST_CASE("single path ensemble equals the path") {
    const auto m = make_linear_model(2, 1.0, 0.2, {0.5, 0.5});
    const auto grid = SimulationGrid::uniform(0.1, 2.0);
    EnsembleOptions opt;
    opt.retain = 1;
    const auto r = simulate_ensemble(m, grid, 1, 9, opt);
    const auto b = simulate_trajectory(m, grid, SeedSpec{9, 0, 0});
    REQUIRE(r.retained.size() == 1);
    CHECK(r.retained[0] == b);
    CHECK(r.stats.mean == b.states);
    for (const auto& v : r.stats.variance) {
        for (double x : v) {
            CHECK(x == 0.0);
        }
    }
}

TEST_CASE("zero dynamics have zero variance") {
    const auto m = make_zero_model(2, {0.1, 0.2});
    const auto r = simulate_ensemble(m, SimulationGrid::uniform(0.1, 1.0), 37, 1);
    for (const auto& v : r.stats.variance) {
        for (double x : v) {
            CHECK(x == 0.0);
        }
    }
    CHECK(r.stats.mean_path_max[1] == doctest::Approx(0.2));
}

TEST_CASE("parallel and serial ensembles agree") {
    ScenarioConfig cfg;
    const auto m = make_scenario(cfg);
    const auto grid = SimulationGrid::uniform(0.1, 10.0);
    const auto par = simulate_ensemble(m, grid, 101, 4);
    const auto ser = simulate_ensemble_serial(m, grid, 101, 4);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t k = 0; k < grid.points(); ++k) {
            CHECK(par.stats.mean[i][k] == doctest::Approx(ser.stats.mean[i][k]).epsilon(1e-12).scale(1e-12));
            CHECK(par.stats.variance[i][k] ==
                  doctest::Approx(ser.stats.variance[i][k]).epsilon(1e-10).scale(1e-12));
        }
        CHECK(par.stats.mean_path_max[i] == doctest::Approx(ser.stats.mean_path_max[i]).epsilon(1e-12));
    }
}

TEST_CASE("parallel ensemble is bitwise stable across thread counts") {
    ScenarioConfig cfg;
    const auto m = make_scenario(cfg);
    const auto grid = SimulationGrid::uniform(0.1, 5.0);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = simulate_ensemble(m, grid, 70, 12);
    omp_set_num_threads(4);
    const auto four = simulate_ensemble(m, grid, 70, 12);
    omp_set_num_threads(saved);
    CHECK(one.stats.mean == four.stats.mean);
    CHECK(one.stats.variance == four.stats.variance);
    CHECK(one.stats.mean_path_max == four.stats.mean_path_max);
}

TEST_CASE("OU-driven linear model matches the mean ODE") {
    // dX = (-X + V) dt + 0.2 dW, V an OU current with V(0) = 1: E X(t) = t exp(-t)
    ReflectedJumpSDE m;
    m.dimension = 1;
    m.drift = [](std::span<const double> x, double v, std::span<double> out) { out[0] = -x[0] + v; };
    m.diffusion = [](std::span<const double>, double, std::span<double> out) { out[0] = 0.2; };
    m.domain = ReflectionDomain::unconstrained(1);
    m.x0 = {0.0};
    m.input = OUParams{0.0, 1.0, 0.1, 1.0};
    const auto grid = SimulationGrid::uniform(0.001, 2.0);
    constexpr std::size_t n = 2000;
    const auto r = simulate_ensemble(m, grid, n, 77);
    for (std::size_t k = 250; k < grid.points(); k += 250) {
        const double t = grid.time(k);
        const double se = std::sqrt(r.stats.variance[0][k] / n);
        CHECK(std::abs(r.stats.mean[0][k] - t * std::exp(-t)) < 3.0 * se + 1e-3);
    }
}

TEST_CASE("empty ensemble is rejected") {
    const auto m = make_zero_model(1, {0.0});
    CHECK_THROWS(simulate_ensemble(m, SimulationGrid::uniform(0.1, 1.0), 0, 1));
    CHECK_THROWS(simulate_ensemble_serial(m, SimulationGrid::uniform(0.1, 1.0), 0, 1));
}
