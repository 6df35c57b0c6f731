#pragma once

#include <array>
#include <string_view>

#include "rsde/engine.hpp"

namespace rsde {

/// Constants of the excitatory (E) / inhibitory (I) Wilson-Cowan system.
/// Defaults are the published parameter set. sigma_ext has no published
/// value; 0.01 keeps trajectories near the resting state at the activity
/// levels reported for the published runs (peak r_E around 0.1 with jumps).
struct WilsonCowanParams {
    double tau_E = 1.0;  // ms
    double tau_I = 2.0;  // ms
    double theta_E = 2.8;
    double theta_I = 4.0;
    double a_E = 1.2;
    double a_I = 1.0;
    double w_EE = 12.0;
    double w_EI = 4.0;
    double w_IE = 13.0;
    double w_II = 11.0;
    double delta_E = 0.2;  // refractory factors
    double delta_I = 0.2;
    double sigma_ext_E = 0.01;
    double sigma_ext_I = 0.01;
    double I_ext_E = 0.0;  // constant part of the external current
    double I_ext_I = 0.0;

    /// Throws std::invalid_argument naming the violated invariant.
    void validate() const;

    friend bool operator==(const WilsonCowanParams&, const WilsonCowanParams&) = default;
};

/// Shifted logistic gain F(x) = 1/(1+exp(-a(x-theta))) - 1/(1+exp(a theta)),
/// so F(0) = 0. Evaluated without overflow for any finite argument.
double sigmoid_F(double x, double theta, double a);

using Rates = std::array<double, 2>;  // (r_E, r_I)

/// Deterministic right-hand side ((-r + (1 - delta r) F(input)) / tau) for
/// both populations, with total external currents I_E, I_I.
Rates wilson_cowan_drift(const Rates& r, const WilsonCowanParams& p, double I_E, double I_I);

/// Diagonal noise amplitude sigma_ext (1 - delta r) / tau per population.
Rates wilson_cowan_diffusion(const Rates& r, const WilsonCowanParams& p);

enum class InputMode { white_noise, ou_current, ou_reflected, ou_reflected_jumps };

std::string_view to_string(InputMode mode);
/// Throws std::invalid_argument for an unknown name.
InputMode input_mode_from_string(std::string_view name);

bool reflects(InputMode mode) noexcept;
bool uses_ou(InputMode mode) noexcept;
bool uses_jumps(InputMode mode) noexcept;

/// Default jump source of the jump scenario (alpha = 0.5 / ms, exponential
/// sizes of mean 1) and response rho = 0.01. These are not published values.
inline constexpr double kDefaultJumpIntensity = 0.5;
inline constexpr double kDefaultJumpMean = 1.0;
inline constexpr double kDefaultJumpResponse = 0.01;

struct ScenarioConfig {
    InputMode mode = InputMode::ou_reflected_jumps;
    WilsonCowanParams params;
    OUParams ou{0.0, 1.0, 0.1, 0.0};
    std::array<CompoundPoissonSpec, 2> jumps{
        CompoundPoissonSpec{kDefaultJumpIntensity, ExponentialJump{kDefaultJumpMean}},
        CompoundPoissonSpec{kDefaultJumpIntensity, ExponentialJump{kDefaultJumpMean}}};
    Rates jump_response{kDefaultJumpResponse, kDefaultJumpResponse};  // state-independent rho_E, rho_I
    Rates x0{0.0, 0.0};

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Jump sources with zero intensity, for the modes without jumps.
std::array<CompoundPoissonSpec, 2> no_jumps();

/// Assembles the stochastic Wilson-Cowan model for a scenario. Reflecting
/// modes use [0, inf)^2; the OU modes attach the OU input current (sampled per
/// trajectory by the engine and added to I_ext of both populations).
/// Rejects jumps with positive intensity in a mode without jumps.
ReflectedJumpSDE make_scenario(const ScenarioConfig& config);

}  // namespace rsde
