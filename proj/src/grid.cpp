#include "rsde/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsde {

SimulationGrid SimulationGrid::dyadic(int level, double horizon) {
    if (level < 1) {
        throw std::invalid_argument("dyadic level must be >= 1, got " + std::to_string(level));
    }
    if (level > kMaxDyadicLevel) {
        throw std::invalid_argument("dyadic level " + std::to_string(level) + " exceeds " +
                                    std::to_string(kMaxDyadicLevel));
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("horizon must be positive and finite");
    }
    return SimulationGrid(Mode::dyadic, level, horizon, std::size_t{1} << level);
}

SimulationGrid SimulationGrid::uniform(double dt, double horizon) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("step width must be positive and finite");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("horizon must be positive and finite");
    }
    const double ratio = horizon / dt;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * steps) {
        throw std::invalid_argument("horizon is not an integer multiple of dt");
    }
    return SimulationGrid(Mode::uniform, 0, horizon, static_cast<std::size_t>(steps));
}

double SimulationGrid::time(std::size_t k) const noexcept {
    if (k >= steps_) {
        return horizon_;
    }
    return static_cast<double>(k) * horizon_ / static_cast<double>(steps_);
}

std::vector<double> SimulationGrid::times() const {
    std::vector<double> t(points());
    for (std::size_t k = 0; k < t.size(); ++k) {
        t[k] = time(k);
    }
    return t;
}

std::size_t SimulationGrid::cell_of(double t) const noexcept {
    if (t <= 0.0) {
        return 0;
    }
    const double scaled = std::ceil(t / horizon_ * static_cast<double>(steps_)) - 1.0;
    std::size_t cell = 0;
    if (scaled >= static_cast<double>(steps_)) {
        cell = steps_ - 1;
    } else if (scaled > 0.0) {
        cell = static_cast<std::size_t>(scaled);
    }
    // the scaled ceil can be off by one when t sits on a grid point up to rounding
    while (cell + 1 < steps_ && time(cell + 1) < t) {
        ++cell;
    }
    while (cell > 0 && time(cell) >= t) {
        --cell;
    }
    return cell;
}

double SimulationGrid::left_endpoint(double t) const noexcept {
    if (t <= 0.0) {
        return 0.0;
    }
    return time(cell_of(t));
}

SimulationGrid SimulationGrid::refined(std::size_t factor) const {
    if (factor == 0) {
        throw std::invalid_argument("refinement factor must be positive");
    }
    if (mode_ == Mode::dyadic) {
        int extra = 0;
        while ((std::size_t{1} << extra) < factor) {
            ++extra;
        }
        if ((std::size_t{1} << extra) != factor) {
            throw std::invalid_argument("dyadic refinement factor must be a power of two");
        }
        return dyadic(level_ + extra, horizon_);
    }
    return SimulationGrid(Mode::uniform, 0, horizon_, steps_ * factor);
}

}  // namespace rsde
