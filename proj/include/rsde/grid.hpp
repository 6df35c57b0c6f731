#pragma once

#include <cstddef>
#include <vector>

namespace rsde {

/// Time discretisation of [0, T].
///
/// Two flavours exist: a dyadic partition of level n (2^n equal cells, the
/// step functions h^n of the approximating scheme) and a uniform grid with a
/// requested dt. Both are stored as (horizon, step count) so that grid points
/// are computed as k * T / N and the last point is exactly T.
class SimulationGrid {
public:
    enum class Mode { dyadic, uniform };

    static constexpr int kMaxDyadicLevel = 30;

    /// Dyadic partition with 2^level cells. Rejects level < 1 and level > 30.
    static SimulationGrid dyadic(int level, double horizon);

    /// Uniform grid with step dt. T/dt must be an integer up to 1e-9 relative
    /// slack; otherwise the grid would not land on T.
    static SimulationGrid uniform(double dt, double horizon);

    Mode mode() const noexcept { return mode_; }
    int level() const noexcept { return level_; }
    double horizon() const noexcept { return horizon_; }
    std::size_t steps() const noexcept { return steps_; }
    std::size_t points() const noexcept { return steps_ + 1; }
    double dt() const noexcept { return horizon_ / static_cast<double>(steps_); }

    double time(std::size_t k) const noexcept;
    std::vector<double> times() const;

    /// Index of the cell (t_k, t_{k+1}] containing t; t = 0 maps to cell 0.
    std::size_t cell_of(double t) const noexcept;

    /// Left-endpoint step function: 0 at t = 0, t_k on (t_k, t_{k+1}].
    double left_endpoint(double t) const noexcept;

    /// Grid of the same horizon with `factor` times as many cells.
    SimulationGrid refined(std::size_t factor) const;

    friend bool operator==(const SimulationGrid&, const SimulationGrid&) = default;

private:
    SimulationGrid(Mode mode, int level, double horizon, std::size_t steps)
        : mode_(mode), level_(level), horizon_(horizon), steps_(steps) {}

    Mode mode_;
    int level_;
    double horizon_;
    std::size_t steps_;
};

}  // namespace rsde
