#pragma once

#include <functional>

#include "rsde/engine.hpp"

namespace rsde {

/// Coefficients of one population in the active/passive system; each sees
/// both states (x_A, x_P) and the exogenous input.
struct PopulationCoefficients {
    std::function<double(double x_A, double x_P, double input)> drift;
    std::function<double(double x_A, double x_P, double input)> diffusion;
    std::function<double(double x_A, double x_P)> jump_response;  // optional
    CompoundPoissonSpec jumps;
};

/// Assembles the coupled two-population system (coordinate 0 = active,
/// coordinate 1 = passive) on the given domain.
ReflectedJumpSDE make_coupled_model(const PopulationCoefficients& active, const PopulationCoefficients& passive,
                                    ReflectionDomain domain, std::vector<double> x0);

/// dX_i = -rate X_i dt + sigma dW_i, unreflected.
ReflectedJumpSDE make_linear_model(std::size_t dimension, double rate, double sigma, std::vector<double> x0);

/// f = g = 0: every path stays at x0.
ReflectedJumpSDE make_zero_model(std::size_t dimension, std::vector<double> x0);

}  // namespace rsde
