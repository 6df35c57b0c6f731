#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rsde/analysis.hpp"
#include "rsde/models.hpp"
#include "rsde/wilson_cowan.hpp"

using namespace rsde;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) {
        t[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return t;
}

SampledPath identity_path(std::size_t n) {
    auto t = linspace(0.0, 1.0, n);
    return scalar_path(t, t);
}

}  // namespace

TEST_CASE("sup norm uses the 1-norm") {
    const auto t = linspace(0.0, 1.0, 11);
    CHECK(sup_norm(scalar_path(t, std::vector<double>(11, 0.0))) == 0.0);

    SampledPath p{t, {t, t}};
    for (double& v : p.values[1]) {
        v = -v;
    }
    CHECK(sup_norm(p) == doctest::Approx(2.0));

    SampledPath c{t, {std::vector<double>(11, 3.0), std::vector<double>(11, 4.0)}};
    CHECK(sup_norm(c) == 7.0);
    CHECK_THROWS(sup_norm(SampledPath{}));
}

TEST_CASE("holder seminorm") {
    const auto t = linspace(0.0, 1.0, 11);
    CHECK(holder_seminorm(scalar_path(t, std::vector<double>(11, 5.0)), 0.5) == 0.0);
    // |t - s|^(1/2) is largest over the whole interval
    CHECK(holder_seminorm(identity_path(11), 0.5) == doctest::Approx(1.0));
    CHECK(holder_seminorm(scalar_path({0.0, 1.0}, {0.0, 1.0}), 0.3) == doctest::Approx(1.0));
    CHECK_THROWS(holder_seminorm(identity_path(11), 1.5));
}

TEST_CASE("sobolev seminorm of the identity") {
    CHECK(sobolev_seminorm(scalar_path(linspace(0, 1, 5), std::vector<double>(5, 2.0)), 0.25, 2.0) == 0.0);

    // reference: 2 * int_0^1 int_0^t (t - s)^(1/2) ds dt by adaptive quadrature
    using boost::math::quadrature::gauss_kronrod;
    const double reference = 2.0 * gauss_kronrod<double, 31>::integrate(
                                       [](double t) {
                                           return gauss_kronrod<double, 31>::integrate(
                                               [t](double s) { return std::sqrt(t - s); }, 0.0, t, 10, 1e-12);
                                       },
                                       0.0, 1.0, 10, 1e-12);
    CHECK(reference == doctest::Approx(8.0 / 15.0).epsilon(1e-8));

    double previous_gap = 1.0;
    for (std::size_t n : {65u, 257u, 1025u}) {
        const double v = sobolev_seminorm(identity_path(n), 0.25, 2.0);
        const double gap = std::abs(v - reference);
        CHECK(gap < previous_gap);
        previous_gap = gap;
    }
    CHECK(previous_gap < 0.01 * reference);
}

TEST_CASE("seminorm homogeneity") {
    std::mt19937_64 engine(1);
    std::normal_distribution<double> n(0.0, 1.0);
    const auto t = linspace(0.0, 2.0, 101);
    std::vector<double> h(t.size());
    for (double& v : h) {
        v = n(engine);
    }
    const double c = -3.5;
    std::vector<double> ch(h);
    for (double& v : ch) {
        v *= c;
    }
    const auto a = scalar_path(t, h), b = scalar_path(t, ch);
    CHECK(sup_norm(b) == doctest::Approx(std::abs(c) * sup_norm(a)));
    CHECK(holder_seminorm(b, 0.4) == doctest::Approx(std::abs(c) * holder_seminorm(a, 0.4)));
    CHECK(sobolev_seminorm(b, 0.25, 3.0) == doctest::Approx(std::pow(std::abs(c), 3.0) * sobolev_seminorm(a, 0.25, 3.0)));
}

TEST_CASE("holder seminorm grows under refinement") {
    const auto f = [](double t) { return std::sin(7.0 * t) + std::sqrt(t); };
    double previous = 0.0;
    for (std::size_t n : {9u, 17u, 33u, 65u, 129u}) {
        const auto t = linspace(0.0, 1.0, n);
        std::vector<double> v(n);
        for (std::size_t k = 0; k < n; ++k) {
            v[k] = f(t[k]);
        }
        const double s = holder_seminorm(scalar_path(t, v), 0.5);
        CHECK(s >= previous);
        previous = s;
    }
}

TEST_CASE("ensemble moment estimators") {
    const auto t = linspace(0.0, 1.0, 4);
    SampledPath one{t, {{1.0, 2.0, 3.0, 4.0}}};
    auto m = ensemble_moments(std::vector<SampledPath>{one});
    CHECK(m.mean[0] == one.values[0]);
    CHECK(m.variance[0] == std::vector<double>(4, 0.0));
    CHECK(m.mean_path_max[0] == 4.0);

    SampledPath zero{t, {std::vector<double>(4, 0.0)}}, two{t, {std::vector<double>(4, 2.0)}};
    m = ensemble_moments(std::vector<SampledPath>{zero, two});
    CHECK(m.mean[0] == std::vector<double>(4, 1.0));
    CHECK(m.variance[0] == std::vector<double>(4, 2.0));

    std::mt19937_64 engine(5);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<SampledPath> many;
    for (int i = 0; i < 10'000; ++i) {
        many.push_back(scalar_path({0.0}, {n(engine)}));
    }
    m = ensemble_moments(many);
    CHECK(m.variance[0][0] == doctest::Approx(1.0).epsilon(0.05));
    CHECK_THROWS(ensemble_moments(std::vector<SampledPath>{}));
}

TEST_CASE("log-log slope") {
    const std::vector<double> x{1.0, 10.0, 100.0}, y{2.0, 200.0, 20000.0};
    CHECK(loglog_slope(x, y) == doctest::Approx(2.0));
    CHECK(std::isnan(loglog_slope(std::vector<double>{1.0}, std::vector<double>{1.0})));
}

TEST_CASE("stability of the linear model") {
    const auto m = make_linear_model(2, 1.0, 0.3, {0.0, 0.0});
    const auto grid = SimulationGrid::uniform(0.1, 5.0);
    const std::vector<double> offsets{0.1, 0.01, 0.001};
    const auto r = stability_experiment(m, grid, offsets, 50, 3);
    // the difference decays deterministically, so the maximum is the initial offset
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        CHECK(r.errors[k] == doctest::Approx(r.perturbation_sizes[k]).epsilon(1e-9));
    }
    CHECK(r.fitted_slope == doctest::Approx(1.0).epsilon(1e-9));

    const std::vector<double> zero{0.0};
    const auto z = stability_experiment(m, grid, zero, 10, 3);
    CHECK(z.errors[0] == 0.0);
}

TEST_CASE("stability errors are ordered by offset on the scenario model") {
    ScenarioConfig cfg;
    cfg.mode = InputMode::ou_reflected;
    cfg.jumps = no_jumps();
    const auto m = make_scenario(cfg);
    const std::vector<double> offsets{0.1, 0.05, 0.01};
    const auto r = stability_experiment(m, SimulationGrid::uniform(0.1, 10.0), offsets, 100, 8);
    for (std::size_t k = 1; k < offsets.size(); ++k) {
        CHECK(r.errors[k] <= r.errors[k - 1] + 3.0 * r.standard_errors[k - 1]);
    }
    CHECK_THROWS(stability_experiment(m, SimulationGrid::uniform(0.1, 1.0), std::vector<double>{0.01, 0.1}, 5, 1));
}

TEST_CASE("parallel and serial experiment loops agree") {
    const auto m = make_linear_model(1, 0.5, 0.4, {1.0});
    ExperimentOptions serial;
    serial.parallel = false;
    const std::vector<double> offsets{0.2, 0.1};
    const auto a = stability_experiment(m, SimulationGrid::uniform(0.1, 2.0), offsets, 33, 2);
    const auto b = stability_experiment(m, SimulationGrid::uniform(0.1, 2.0), offsets, 33, 2, {}, serial);
    CHECK(a.errors == b.errors);
    const std::vector<int> levels{3, 4};
    const auto c = strong_convergence_experiment(m, 1.0, levels, 33, 2);
    const auto d = strong_convergence_experiment(m, 1.0, levels, 33, 2, 3, serial);
    CHECK(c.rms_error == d.rms_error);
}

TEST_CASE("euler order on a deterministic model") {
    const auto m = make_linear_model(1, 1.0, 0.0, {1.0});
    const std::vector<int> levels{4, 5, 6, 7, 8};
    const auto r = strong_convergence_experiment(m, 1.0, levels, 4, 1);
    CHECK(r.reference_level == 11);
    CHECK(r.empirical_order == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("additive-noise linear model converges monotonically") {
    const auto m = make_linear_model(2, 1.0, 0.5, {0.2, 0.2});
    const std::vector<int> levels{3, 4, 5, 6, 7};
    const auto r = strong_convergence_experiment(m, 2.0, levels, 200, 17);
    for (std::size_t l = 1; l < levels.size(); ++l) {
        CHECK(r.rms_error[l] < r.rms_error[l - 1]);
    }
}

TEST_CASE("zero dynamics have no discretisation error") {
    const auto m = make_zero_model(2, {1.0, 1.0});
    const std::vector<int> levels{2, 3, 4};
    const auto r = strong_convergence_experiment(m, 1.0, levels, 10, 1);
    for (double e : r.rms_error) {
        CHECK(e == 0.0);
    }
}

TEST_CASE("reflected scenario converges") {
    ScenarioConfig cfg;
    cfg.mode = InputMode::ou_reflected;
    cfg.jumps = no_jumps();
    const auto m = make_scenario(cfg);
    const std::vector<int> levels{4, 5, 6, 7};
    const auto r = strong_convergence_experiment(m, 5.0, levels, 50, 4);
    CHECK(r.rms_error.back() < r.rms_error.front());
}
