#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rsde/random.hpp"

namespace rsde {

/// Bounded axis-aligned sampling box.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dimension() const noexcept { return lo.size(); }
    void validate() const;
};

using VectorFunction = std::function<std::vector<double>(std::span<const double>)>;

struct LipschitzEstimate {
    double constant = 0.0;
    std::size_t samples = 0;
};

/// Largest |fn(x) - fn(z)| / |x - z| over sampled pairs in the box, with the
/// 1-norm |u| = sum |u_i| on both sides. Half of the pairs are independent
/// uniform points, half are close pairs (separation ~1e-4 of the box width)
/// so that the estimate approaches sup |fn'| from below.
LipschitzEstimate estimate_lipschitz_constant(const VectorFunction& fn, const Box& box, std::size_t n_samples,
                                              std::uint64_t seed = 0);

/// Jump response rho(x, y) for a state x and jump size y.
using JumpResponse = std::function<std::vector<double>(std::span<const double> x, double y)>;

struct JumpBoundCheck {
    double growth_ratio = 0.0;     // max_x E|rho(x, xi)|^2 / (1 + |x|^2)
    double lipschitz_ratio = 0.0;  // max_{x,z} E|rho(x, xi) - rho(z, xi)|^2 / |x - z|^2
    double c_rho = 0.0;            // larger of the two
    bool pass = false;             // C_rho finite
    std::size_t jump_samples = 0;
    std::size_t state_samples = 0;
};

/// Monte Carlo check of the square-integrability bounds on the jump
/// response. The expectation over psi uses `n_samples` jump sizes shared by
/// all states; states are the box corners, its centre and `n_states` uniform
/// points (pairs for the Lipschitz ratio). Rejects a jump law without a finite
/// second moment.
JumpBoundCheck check_jump_coefficient_bound(const JumpResponse& rho, const CompoundPoissonSpec& spec, const Box& box,
                                            std::size_t n_samples, std::uint64_t seed = 0,
                                            std::size_t n_states = 64);

}  // namespace rsde
