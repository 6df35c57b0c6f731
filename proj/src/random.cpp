#include "rsde/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsde {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::uint64_t SeedSpec::key() const noexcept {
    // Chained mixing: each stage is a bijection of (previous hash xor input),
    // so collisions need a full 64-bit coincidence.
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ splitmix64(stream_index + 0x632be59bd9b4e019ULL));
    h = splitmix64(h ^ splitmix64(component_index + 0x85157af5ULL));
    return h;
}

SeedSpec derive_stream_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t component) {
    return SeedSpec{master, stream, component};
}

std::mt19937_64 make_engine(const SeedSpec& seed) {
    return std::mt19937_64(seed.key());
}

double jump_mean(const JumpDistribution& dist) {
    return std::visit(overloaded{
                          [](const ConstantJump& d) { return d.value; },
                          [](const ExponentialJump& d) { return d.mean; },
                          [](const UniformJump& d) { return 0.5 * (d.lo + d.hi); },
                      },
                      dist);
}

double jump_second_moment(const JumpDistribution& dist) {
    return std::visit(overloaded{
                          [](const ConstantJump& d) { return d.value * d.value; },
                          [](const ExponentialJump& d) { return 2.0 * d.mean * d.mean; },
                          [](const UniformJump& d) { return (d.lo * d.lo + d.lo * d.hi + d.hi * d.hi) / 3.0; },
                      },
                      dist);
}

double draw_jump_size(const JumpDistribution& dist, std::mt19937_64& engine) {
    return std::visit(overloaded{
                          [](const ConstantJump& d) { return d.value; },
                          [&engine](const ExponentialJump& d) {
                              return std::exponential_distribution<double>(1.0 / d.mean)(engine);
                          },
                          [&engine](const UniformJump& d) {
                              return std::uniform_real_distribution<double>(d.lo, d.hi)(engine);
                          },
                      },
                      dist);
}

void CompoundPoissonSpec::validate() const {
    if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
        throw std::invalid_argument("jump intensity must be finite and >= 0");
    }
    std::visit(overloaded{
                   [](const ConstantJump& d) {
                       if (!std::isfinite(d.value)) {
                           throw std::invalid_argument("constant jump size must be finite");
                       }
                   },
                   [](const ExponentialJump& d) {
                       if (!(d.mean > 0.0) || !std::isfinite(d.mean)) {
                           throw std::invalid_argument("exponential jump mean must be positive and finite");
                       }
                   },
                   [](const UniformJump& d) {
                       if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || !(d.lo < d.hi)) {
                           throw std::invalid_argument("uniform jump bounds must be finite with lo < hi");
                       }
                   },
               },
               jump_dist);
    if (!std::isfinite(jump_second_moment(jump_dist))) {
        throw std::invalid_argument("jump-size law has no finite second moment");
    }
}

void OUParams::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("OU relaxation time gamma must be positive");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("OU sigma must be >= 0");
    }
    if (!std::isfinite(mu) || !std::isfinite(v0)) {
        throw std::invalid_argument("OU mu and v0 must be finite");
    }
}

std::vector<double> sample_wiener_increments(const SeedSpec& seed, std::span<const double> step_widths) {
    if (step_widths.empty()) {
        throw std::invalid_argument("need at least one step");
    }
    for (double dt : step_widths) {
        if (!(dt > 0.0) || !std::isfinite(dt)) {
            throw std::invalid_argument("step widths must be positive");
        }
    }
    auto engine = make_engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> out(step_widths.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::sqrt(step_widths[i]) * normal(engine);
    }
    return out;
}

std::vector<double> sample_wiener_increments(const SeedSpec& seed, const SimulationGrid& grid) {
    auto engine = make_engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> out(grid.steps());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::sqrt(grid.time(i + 1) - grid.time(i)) * normal(engine);
    }
    return out;
}

std::vector<JumpEvent> sample_compound_poisson(const SeedSpec& seed, const CompoundPoissonSpec& spec,
                                               double horizon, std::size_t component) {
    spec.validate();
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("horizon must be positive");
    }
    if (spec.intensity == 0.0) {
        return {};
    }
    auto engine = make_engine(seed);
    const auto count = std::poisson_distribution<long>(spec.intensity * horizon)(engine);
    std::uniform_real_distribution<double> uniform(0.0, horizon);
    std::vector<double> times(static_cast<std::size_t>(count));
    for (double& t : times) {
        t = uniform(engine);
    }
    std::sort(times.begin(), times.end());

    std::vector<JumpEvent> events;
    events.reserve(times.size());
    for (double t : times) {
        events.push_back(JumpEvent{t, draw_jump_size(spec.jump_dist, engine), component});
    }
    return events;
}

std::vector<double> ou_path_from_increments(const OUParams& params, double dt, std::span<const double> dW) {
    params.validate();
    std::vector<double> v(dW.size() + 1);
    v[0] = params.v0;
    for (std::size_t k = 0; k < dW.size(); ++k) {
        v[k + 1] = v[k] + (params.mu - v[k] / params.gamma) * dt + params.sigma * dW[k];
    }
    return v;
}

std::vector<double> sample_ou_path(const SeedSpec& seed, const OUParams& params, const SimulationGrid& grid) {
    const auto dW = sample_wiener_increments(seed, grid);
    return ou_path_from_increments(params, grid.dt(), dW);
}

}  // namespace rsde
