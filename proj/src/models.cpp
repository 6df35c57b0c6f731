#include "rsde/models.hpp"

#include <stdexcept>

namespace rsde {

ReflectedJumpSDE make_coupled_model(const PopulationCoefficients& active, const PopulationCoefficients& passive,
                                    ReflectionDomain domain, std::vector<double> x0) {
    if (!active.drift || !passive.drift || !active.diffusion || !passive.diffusion) {
        throw std::invalid_argument("coupled model needs drift and diffusion for both populations");
    }
    ReflectedJumpSDE m;
    m.dimension = 2;
    m.drift = [fa = active.drift, fp = passive.drift](std::span<const double> x, double u, std::span<double> out) {
        out[0] = fa(x[0], x[1], u);
        out[1] = fp(x[0], x[1], u);
    };
    m.diffusion = [ga = active.diffusion, gp = passive.diffusion](std::span<const double> x, double u,
                                                                  std::span<double> out) {
        out[0] = ga(x[0], x[1], u);
        out[1] = gp(x[0], x[1], u);
    };
    if (active.jumps.intensity > 0.0 || passive.jumps.intensity > 0.0) {
        m.jump_specs = {active.jumps, passive.jumps};
        m.jump_coefficient = [ra = active.jump_response, rp = passive.jump_response](std::span<const double> x,
                                                                                     std::span<double> out) {
            out[0] = ra ? ra(x[0], x[1]) : 0.0;
            out[1] = rp ? rp(x[0], x[1]) : 0.0;
        };
    }
    m.domain = std::move(domain);
    m.x0 = std::move(x0);
    m.validate();
    return m;
}

ReflectedJumpSDE make_linear_model(std::size_t dimension, double rate, double sigma, std::vector<double> x0) {
    ReflectedJumpSDE m;
    m.dimension = dimension;
    m.drift = [rate](std::span<const double> x, double, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            out[i] = -rate * x[i];
        }
    };
    m.diffusion = [sigma](std::span<const double>, double, std::span<double> out) {
        for (double& v : out) {
            v = sigma;
        }
    };
    m.domain = ReflectionDomain::unconstrained(dimension);
    m.x0 = std::move(x0);
    m.validate();
    return m;
}

ReflectedJumpSDE make_zero_model(std::size_t dimension, std::vector<double> x0) {
    ReflectedJumpSDE m;
    m.dimension = dimension;
    m.drift = [](std::span<const double>, double, std::span<double> out) {
        for (double& v : out) {
            v = 0.0;
        }
    };
    m.diffusion = m.drift;
    m.domain = ReflectionDomain::unconstrained(dimension);
    m.x0 = std::move(x0);
    m.validate();
    return m;
}

}  // namespace rsde
