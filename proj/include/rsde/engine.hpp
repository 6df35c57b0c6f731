#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsde/grid.hpp"
#include "rsde/random.hpp"
#include "rsde/skorokhod.hpp"

namespace rsde {

/// Coupled reflected jump-diffusion
///   dX = f(X) dt + g(X) dW + rho(X) dJ + dPhi,  X(0) = x0 in the domain,
/// with diagonal noise (one Wiener component per coordinate) and one
/// compound Poisson source per coordinate. `input` is an optional exogenous
/// scalar process (an OU current) passed to the drift and diffusion.
struct ReflectedJumpSDE {
    /// out = coefficient(x, exogenous input value)
    using Coefficient = std::function<void(std::span<const double> x, double input, std::span<double> out)>;
    /// out[i] = rho_i(x), multiplies jumps of coordinate i
    using JumpCoefficient = std::function<void(std::span<const double> x, std::span<double> out)>;

    std::size_t dimension = 0;
    Coefficient drift;
    Coefficient diffusion;
    JumpCoefficient jump_coefficient;  // empty: no jump response
    std::vector<CompoundPoissonSpec> jump_specs;  // one per coordinate; empty: no jumps
    ReflectionDomain domain;
    std::vector<double> x0;
    std::optional<OUParams> input;

    bool has_jumps() const noexcept;

    /// Structural checks: sizes agree, x0 lies in the domain, specs valid.
    void validate() const;
};

/// Abort raised when a coefficient evaluates to a non-finite value.
class SimulationAbort : public std::runtime_error {
public:
    SimulationAbort(std::size_t step, const std::string& what);
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

enum class JumpTiming {
    end_of_step,  // jumps in (t_k, t_{k+1}] added to the step proposal, one reflection
    split,        // step split at jump times with Brownian-bridge increments
};

/// All randomness consumed by one trajectory on one grid.
struct NoiseRealization {
    std::vector<std::vector<double>> dW;  // [coordinate][step]
    std::vector<JumpEvent> jumps;         // all coordinates, sorted by time
    std::vector<double> input;            // exogenous value per grid point; empty = 0
    SeedSpec bridge_seed;                 // only used with JumpTiming::split
};

/// Draws the noise of trajectory `stream` under `master_seed`.
NoiseRealization sample_noise(const ReflectedJumpSDE& model, const SimulationGrid& grid, std::uint64_t master_seed,
                              std::uint64_t stream);

/// Aggregates noise drawn on a grid with `factor` times more cells: Wiener
/// increments are summed per coarse cell, the input path is subsampled at
/// coarse grid points and jump events are kept as is.
NoiseRealization coarsen(const NoiseRealization& fine, std::size_t factor);

struct JumpRecord {
    JumpEvent event;
    std::size_t step = 0;  // cell (t_k, t_{k+1}] the jump fell into
    double amount = 0.0;   // size * rho_c(state) actually added

    friend bool operator==(const JumpRecord&, const JumpRecord&) = default;
};

struct StepResult {
    std::vector<double> state;
    std::vector<double> phi_lower;  // reflection pushes this step
    std::vector<double> phi_upper;
    std::vector<double> jump_contribution;
    std::vector<double> jump_amounts;  // one per event in the step
};

/// One Euler step with coefficients frozen at `state`:
/// proposal = state + f dt + g dW + sum_j size_j rho_{c_j}(state) e_{c_j},
/// then projected onto the domain. Throws SimulationAbort on non-finite values.
StepResult euler_step(const ReflectedJumpSDE& model, std::span<const double> state, std::span<const double> dW,
                      std::span<const JumpEvent> jumps_in_step, double dt, double input = 0.0,
                      std::size_t step_index = 0);

/// Path of X together with its reflection terms and jump log.
struct TrajectoryBundle {
    SimulationGrid grid = SimulationGrid::dyadic(1, 1.0);
    std::vector<double> times;
    std::vector<std::vector<double>> states;             // [coordinate][point]
    std::vector<std::vector<double>> phi_lower;          // cumulative lower-face push
    std::vector<std::vector<double>> phi_upper;          // cumulative upper-face push
    std::vector<std::vector<double>> jump_total;         // cumulative jump contribution
    std::vector<std::vector<std::uint32_t>> jump_count;  // cumulative applied jumps
    std::vector<JumpRecord> jumps;
    SeedSpec seed;  // (master, trajectory, 0)

    std::size_t dimension() const noexcept { return states.size(); }
    std::size_t points() const noexcept { return times.size(); }

    /// Net reflection term phi = phi_lower - phi_upper of one coordinate
    /// with its running total variation.
    ReflectedPath reflected(std::size_t coordinate) const;

    friend bool operator==(const TrajectoryBundle&, const TrajectoryBundle&) = default;
};

struct EngineOptions {
    JumpTiming jump_timing = JumpTiming::end_of_step;
};

/// Runs the recursion on given noise. `x0` overrides the model's initial state
/// when non-empty (used by common-random-number comparisons).
TrajectoryBundle integrate(const ReflectedJumpSDE& model, const SimulationGrid& grid, const NoiseRealization& noise,
                           const EngineOptions& options = {}, std::span<const double> x0 = {});

/// sample_noise + integrate for trajectory `seed.stream_index`.
TrajectoryBundle simulate_trajectory(const ReflectedJumpSDE& model, const SimulationGrid& grid, const SeedSpec& seed,
                                     const EngineOptions& options = {});

}  // namespace rsde
