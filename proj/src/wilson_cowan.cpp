#include "rsde/wilson_cowan.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsde {

namespace {

double logistic(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void require(bool ok, const char* what) {
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

}  // namespace

void WilsonCowanParams::validate() const {
    require(tau_E > 0.0 && tau_I > 0.0, "tau_E and tau_I must be positive");
    require(a_E > 0.0 && a_I > 0.0, "sigmoid slopes a_E and a_I must be positive");
    require(delta_E >= 0.0 && delta_E <= 1.0 && delta_I >= 0.0 && delta_I <= 1.0,
            "refractory factors delta_E and delta_I must lie in [0, 1]");
    require(w_EE >= 0.0 && w_EI >= 0.0 && w_IE >= 0.0 && w_II >= 0.0, "connection strengths must be >= 0");
    require(sigma_ext_E >= 0.0 && sigma_ext_I >= 0.0, "noise amplitudes must be >= 0");
    for (double v : {tau_E, tau_I, theta_E, theta_I, a_E, a_I, w_EE, w_EI, w_IE, w_II, delta_E, delta_I, sigma_ext_E,
                     sigma_ext_I, I_ext_E, I_ext_I}) {
        require(std::isfinite(v), "Wilson-Cowan parameters must be finite");
    }
}

double sigmoid_F(double x, double theta, double a) {
    return logistic(a * (x - theta)) - logistic(-a * theta);
}

Rates wilson_cowan_drift(const Rates& r, const WilsonCowanParams& p, double I_E, double I_I) {
    const double input_E = p.w_EE * r[0] - p.w_EI * r[1] + I_E;
    const double input_I = p.w_IE * r[0] - p.w_II * r[1] + I_I;
    return {(-r[0] + (1.0 - p.delta_E * r[0]) * sigmoid_F(input_E, p.theta_E, p.a_E)) / p.tau_E,
            (-r[1] + (1.0 - p.delta_I * r[1]) * sigmoid_F(input_I, p.theta_I, p.a_I)) / p.tau_I};
}

Rates wilson_cowan_diffusion(const Rates& r, const WilsonCowanParams& p) {
    return {p.sigma_ext_E * (1.0 - p.delta_E * r[0]) / p.tau_E, p.sigma_ext_I * (1.0 - p.delta_I * r[1]) / p.tau_I};
}

std::string_view to_string(InputMode mode) {
    switch (mode) {
        case InputMode::white_noise:
            return "white_noise";
        case InputMode::ou_current:
            return "ou_current";
        case InputMode::ou_reflected:
            return "ou_reflected";
        case InputMode::ou_reflected_jumps:
            return "ou_reflected_jumps";
    }
    return "unknown";
}

InputMode input_mode_from_string(std::string_view name) {
    for (auto m : {InputMode::white_noise, InputMode::ou_current, InputMode::ou_reflected,
                   InputMode::ou_reflected_jumps}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw std::invalid_argument("unknown scenario mode '" + std::string(name) + "'");
}

bool reflects(InputMode mode) noexcept {
    return mode == InputMode::ou_reflected || mode == InputMode::ou_reflected_jumps;
}

bool uses_ou(InputMode mode) noexcept {
    return mode != InputMode::white_noise;
}

bool uses_jumps(InputMode mode) noexcept {
    return mode == InputMode::ou_reflected_jumps;
}

std::array<CompoundPoissonSpec, 2> no_jumps() {
    return {CompoundPoissonSpec{0.0, ConstantJump{0.0}}, CompoundPoissonSpec{0.0, ConstantJump{0.0}}};
}

ReflectedJumpSDE make_scenario(const ScenarioConfig& config) {
    config.params.validate();
    for (const auto& j : config.jumps) {
        j.validate();
        if (j.intensity > 0.0 && !uses_jumps(config.mode)) {
            throw std::invalid_argument("scenario '" + std::string(to_string(config.mode)) +
                                        "' does not allow jumps (jump intensity > 0)");
        }
    }

    ReflectedJumpSDE model;
    model.dimension = 2;
    const WilsonCowanParams p = config.params;
    model.drift = [p](std::span<const double> x, double input, std::span<double> out) {
        const auto d = wilson_cowan_drift({x[0], x[1]}, p, p.I_ext_E + input, p.I_ext_I + input);
        out[0] = d[0];
        out[1] = d[1];
    };
    model.diffusion = [p](std::span<const double> x, double, std::span<double> out) {
        const auto g = wilson_cowan_diffusion({x[0], x[1]}, p);
        out[0] = g[0];
        out[1] = g[1];
    };
    model.domain = reflects(config.mode) ? ReflectionDomain::orthant(2) : ReflectionDomain::unconstrained(2);
    model.x0 = {config.x0[0], config.x0[1]};
    if (uses_ou(config.mode)) {
        config.ou.validate();
        model.input = config.ou;
    }
    if (uses_jumps(config.mode)) {
        model.jump_specs = {config.jumps[0], config.jumps[1]};
        const Rates rho = config.jump_response;
        model.jump_coefficient = [rho](std::span<const double>, std::span<double> out) {
            out[0] = rho[0];
            out[1] = rho[1];
        };
    }
    model.validate();
    return model;
}

}  // namespace rsde
