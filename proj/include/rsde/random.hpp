#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "rsde/grid.hpp"

namespace rsde {

/// Identifies one reproducible random stream: a trajectory (`stream`) and
/// one of its noise sources (`component`) under a run-wide master seed.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
    std::uint64_t component_index = 0;

    /// 64-bit engine key mixed from the triple.
    std::uint64_t key() const noexcept;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Component indices of the noise sources owned by one trajectory.
namespace component {
constexpr std::uint64_t wiener(std::size_t coordinate) { return coordinate; }
constexpr std::uint64_t jumps(std::size_t coordinate) { return 64 + coordinate; }
constexpr std::uint64_t input = 128;
constexpr std::uint64_t bridge = 129;
}  // namespace component

SeedSpec derive_stream_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t component);

/// Engine seeded from a SeedSpec. Every sampler below builds its own engine,
/// so sampling is a pure function of its arguments.
std::mt19937_64 make_engine(const SeedSpec& seed);

struct ConstantJump {
    double value = 1.0;
    friend bool operator==(const ConstantJump&, const ConstantJump&) = default;
};
struct ExponentialJump {
    double mean = 1.0;
    friend bool operator==(const ExponentialJump&, const ExponentialJump&) = default;
};
struct UniformJump {
    double lo = 0.0;
    double hi = 1.0;
    friend bool operator==(const UniformJump&, const UniformJump&) = default;
};

/// Jump-size law psi. To add a family: add an alternative here and extend the
/// visitors in random.cpp (validation, moments, draw).
using JumpDistribution = std::variant<ConstantJump, ExponentialJump, UniformJump>;

double jump_mean(const JumpDistribution& dist);
double jump_second_moment(const JumpDistribution& dist);
double draw_jump_size(const JumpDistribution& dist, std::mt19937_64& engine);

/// Compound Poisson source: intensity alpha and jump-size law psi.
struct CompoundPoissonSpec {
    double intensity = 0.0;
    JumpDistribution jump_dist = ConstantJump{1.0};

    /// Throws std::invalid_argument on negative/non-finite intensity or a
    /// jump law without a finite second moment.
    void validate() const;

    friend bool operator==(const CompoundPoissonSpec&, const CompoundPoissonSpec&) = default;
};

struct JumpEvent {
    double time = 0.0;
    double size = 0.0;
    std::size_t component = 0;  // 0 = active (E), 1 = passive (I)

    friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

struct OUParams {
    double mu = 0.0;
    double gamma = 1.0;
    double sigma = 0.1;
    double v0 = 0.0;

    void validate() const;
    friend bool operator==(const OUParams&, const OUParams&) = default;
};

/// Normal(0, dt_i) increments for explicit step widths. Rejects dt_i <= 0.
std::vector<double> sample_wiener_increments(const SeedSpec& seed, std::span<const double> step_widths);
std::vector<double> sample_wiener_increments(const SeedSpec& seed, const SimulationGrid& grid);

/// Jump events on [0, horizon]: Poisson(alpha * horizon) count, times as
/// sorted iid uniforms, sizes iid from psi. Events carry `component`.
std::vector<JumpEvent> sample_compound_poisson(const SeedSpec& seed, const CompoundPoissonSpec& spec,
                                               double horizon, std::size_t component = 0);

/// Euler path of dV = (mu - V/gamma) dt + sigma dW on the grid points.
std::vector<double> sample_ou_path(const SeedSpec& seed, const OUParams& params, const SimulationGrid& grid);

/// Euler OU recursion driven by given increments (used when the increments
/// come from a finer grid or are shared between runs).
std::vector<double> ou_path_from_increments(const OUParams& params, double dt, std::span<const double> dW);

}  // namespace rsde
