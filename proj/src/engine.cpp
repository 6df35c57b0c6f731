#include "rsde/engine.hpp"

#include <algorithm>
#include <cmath>

namespace rsde {

namespace {

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_finite(std::span<const double> v, std::size_t step, const char* what) {
    if (!all_finite(v)) {
        throw SimulationAbort(step, std::string("non-finite ") + what + " at step " + std::to_string(step));
    }
}

// Scratch buffers for one trajectory.
struct Workspace {
    explicit Workspace(std::size_t d)
        : drift(d), diffusion(d), rho(d), lower(d), upper(d) {}
    std::vector<double> drift, diffusion, rho, lower, upper;
};

// state <- Proj(state + f dt + g dW), coefficients taken at the incoming state;
// lower/upper hold the pushes.
void diffuse_and_reflect(const ReflectedJumpSDE& model, std::span<double> state, std::span<const double> dW,
                         double dt, double input, std::size_t step, Workspace& ws) {
    model.drift(state, input, ws.drift);
    model.diffusion(state, input, ws.diffusion);
    check_finite(ws.drift, step, "drift");
    check_finite(ws.diffusion, step, "diffusion");
    for (std::size_t i = 0; i < state.size(); ++i) {
        state[i] += ws.drift[i] * dt + ws.diffusion[i] * dW[i];
    }
    check_finite(state, step, "state");
    reflect_box_inplace(state, model.domain, ws.lower, ws.upper);
}

}  // namespace

bool ReflectedJumpSDE::has_jumps() const noexcept {
    return std::any_of(jump_specs.begin(), jump_specs.end(),
                       [](const CompoundPoissonSpec& s) { return s.intensity > 0.0; });
}

void ReflectedJumpSDE::validate() const {
    if (dimension == 0) {
        throw std::invalid_argument("model dimension must be positive");
    }
    if (!drift || !diffusion) {
        throw std::invalid_argument("model needs drift and diffusion coefficients");
    }
    if (domain.dimension() != dimension || x0.size() != dimension) {
        throw std::invalid_argument("domain / initial state dimension mismatch");
    }
    if (!all_finite(x0) || !domain.contains(x0)) {
        throw std::invalid_argument("initial state must lie in the closed domain");
    }
    if (!jump_specs.empty() && jump_specs.size() != dimension) {
        throw std::invalid_argument("need one jump spec per coordinate");
    }
    for (const auto& s : jump_specs) {
        s.validate();
    }
    if (has_jumps() && !jump_coefficient) {
        throw std::invalid_argument("jumps configured without a jump coefficient");
    }
    if (input) {
        input->validate();
    }
}

SimulationAbort::SimulationAbort(std::size_t step, const std::string& what)
    : std::runtime_error(what), step_(step) {}

NoiseRealization sample_noise(const ReflectedJumpSDE& model, const SimulationGrid& grid, std::uint64_t master_seed,
                              std::uint64_t stream) {
    NoiseRealization noise;
    noise.dW.reserve(model.dimension);
    for (std::size_t i = 0; i < model.dimension; ++i) {
        noise.dW.push_back(sample_wiener_increments(derive_stream_seed(master_seed, stream, component::wiener(i)), grid));
    }
    for (std::size_t i = 0; i < model.jump_specs.size(); ++i) {
        auto events = sample_compound_poisson(derive_stream_seed(master_seed, stream, component::jumps(i)),
                                              model.jump_specs[i], grid.horizon(), i);
        noise.jumps.insert(noise.jumps.end(), events.begin(), events.end());
    }
    std::stable_sort(noise.jumps.begin(), noise.jumps.end(),
                     [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
    if (model.input) {
        noise.input = sample_ou_path(derive_stream_seed(master_seed, stream, component::input), *model.input, grid);
    }
    noise.bridge_seed = derive_stream_seed(master_seed, stream, component::bridge);
    return noise;
}

NoiseRealization coarsen(const NoiseRealization& fine, std::size_t factor) {
    if (factor == 0) {
        throw std::invalid_argument("coarsening factor must be positive");
    }
    NoiseRealization coarse;
    coarse.jumps = fine.jumps;
    coarse.bridge_seed = fine.bridge_seed;
    for (const auto& dW : fine.dW) {
        if (dW.size() % factor != 0) {
            throw std::invalid_argument("fine step count not divisible by coarsening factor");
        }
        std::vector<double> agg(dW.size() / factor, 0.0);
        for (std::size_t k = 0; k < agg.size(); ++k) {
            double sum = 0.0;
            for (std::size_t j = 0; j < factor; ++j) {
                sum += dW[k * factor + j];
            }
            agg[k] = sum;
        }
        coarse.dW.push_back(std::move(agg));
    }
    if (!fine.input.empty()) {
        const std::size_t steps = (fine.input.size() - 1) / factor;
        coarse.input.resize(steps + 1);
        for (std::size_t k = 0; k <= steps; ++k) {
            coarse.input[k] = fine.input[k * factor];
        }
    }
    return coarse;
}

StepResult euler_step(const ReflectedJumpSDE& model, std::span<const double> state, std::span<const double> dW,
                      std::span<const JumpEvent> jumps_in_step, double dt, double input, std::size_t step_index) {
    const std::size_t d = model.dimension;
    if (state.size() != d || dW.size() != d) {
        throw std::invalid_argument("euler_step: dimension mismatch");
    }
    Workspace ws(d);
    StepResult out;
    out.state.assign(state.begin(), state.end());
    out.jump_contribution.assign(d, 0.0);

    model.drift(state, input, ws.drift);
    model.diffusion(state, input, ws.diffusion);
    check_finite(ws.drift, step_index, "drift");
    check_finite(ws.diffusion, step_index, "diffusion");
    if (!jumps_in_step.empty()) {
        model.jump_coefficient(state, ws.rho);
        check_finite(ws.rho, step_index, "jump coefficient");
        out.jump_amounts.reserve(jumps_in_step.size());
        for (const auto& j : jumps_in_step) {
            const double amount = j.size * ws.rho.at(j.component);
            out.jump_amounts.push_back(amount);
            out.jump_contribution[j.component] += amount;
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        out.state[i] += ws.drift[i] * dt + ws.diffusion[i] * dW[i] + out.jump_contribution[i];
    }
    check_finite(out.state, step_index, "state");
    out.phi_lower.resize(d);
    out.phi_upper.resize(d);
    reflect_box_inplace(out.state, model.domain, out.phi_lower, out.phi_upper);
    return out;
}

ReflectedPath TrajectoryBundle::reflected(std::size_t coordinate) const {
    ReflectedPath p;
    p.xi = states.at(coordinate);
    p.phi.resize(points());
    for (std::size_t k = 0; k < points(); ++k) {
        p.phi[k] = phi_lower[coordinate][k] - phi_upper[coordinate][k];
    }
    p.phi_tv = total_variation(p.phi);
    return p;
}

TrajectoryBundle integrate(const ReflectedJumpSDE& model, const SimulationGrid& grid, const NoiseRealization& noise,
                           const EngineOptions& options, std::span<const double> x0) {
    model.validate();
    const std::size_t d = model.dimension;
    const std::size_t n = grid.steps();
    if (noise.dW.size() != d || std::any_of(noise.dW.begin(), noise.dW.end(),
                                            [n](const auto& v) { return v.size() != n; })) {
        throw std::invalid_argument("noise does not match model dimension / grid");
    }
    if (!noise.input.empty() && noise.input.size() != grid.points()) {
        throw std::invalid_argument("input path does not match grid");
    }
    std::vector<double> state = x0.empty() ? model.x0 : std::vector<double>(x0.begin(), x0.end());
    if (state.size() != d || !model.domain.contains(state)) {
        throw std::invalid_argument("initial state must lie in the closed domain");
    }

    TrajectoryBundle b;
    b.grid = grid;
    b.times = grid.times();
    b.states.assign(d, std::vector<double>(n + 1));
    b.phi_lower.assign(d, std::vector<double>(n + 1, 0.0));
    b.phi_upper.assign(d, std::vector<double>(n + 1, 0.0));
    b.jump_total.assign(d, std::vector<double>(n + 1, 0.0));
    b.jump_count.assign(d, std::vector<std::uint32_t>(n + 1, 0));
    for (std::size_t i = 0; i < d; ++i) {
        b.states[i][0] = state[i];
    }

    Workspace ws(d);
    std::vector<double> dW(d), dW_rest(d), step_lower(d), step_upper(d), step_jump(d);
    std::vector<std::uint32_t> step_count(d);
    auto bridge_engine = make_engine(noise.bridge_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::size_t next_jump = 0;

    for (std::size_t k = 0; k < n; ++k) {
        const double t0 = b.times[k];
        const double t1 = b.times[k + 1];
        const double dt = t1 - t0;
        const double input = noise.input.empty() ? 0.0 : noise.input[k];
        for (std::size_t i = 0; i < d; ++i) {
            dW[i] = noise.dW[i][k];
        }
        std::fill(step_lower.begin(), step_lower.end(), 0.0);
        std::fill(step_upper.begin(), step_upper.end(), 0.0);
        std::fill(step_jump.begin(), step_jump.end(), 0.0);
        std::fill(step_count.begin(), step_count.end(), 0u);

        const std::size_t first = next_jump;
        while (next_jump < noise.jumps.size() && grid.cell_of(noise.jumps[next_jump].time) == k) {
            ++next_jump;
        }
        const std::span<const JumpEvent> in_step(noise.jumps.data() + first, next_jump - first);

        if (options.jump_timing == JumpTiming::end_of_step || in_step.empty()) {
            auto r = euler_step(model, state, dW, in_step, dt, input, k);
            state = std::move(r.state);
            step_lower = std::move(r.phi_lower);
            step_upper = std::move(r.phi_upper);
            step_jump = std::move(r.jump_contribution);
            for (std::size_t e = 0; e < in_step.size(); ++e) {
                b.jumps.push_back(JumpRecord{in_step[e], k, r.jump_amounts[e]});
                ++step_count[in_step[e].component];
            }
        } else {
            // Split the cell at each jump time; the Brownian path between the
            // current time and t1 is a bridge pinned by the remaining increment.
            dW_rest = dW;
            double t_cur = t0;
            for (const auto& j : in_step) {
                const double rest = t1 - t_cur;
                const double s = std::clamp(j.time - t_cur, 0.0, rest);
                std::vector<double> dW_sub(d);
                for (std::size_t i = 0; i < d; ++i) {
                    const double mean = rest > 0.0 ? dW_rest[i] * s / rest : 0.0;
                    const double var = rest > 0.0 ? s * (rest - s) / rest : 0.0;
                    dW_sub[i] = mean + std::sqrt(var) * normal(bridge_engine);
                    dW_rest[i] -= dW_sub[i];
                }
                diffuse_and_reflect(model, state, dW_sub, s, input, k, ws);
                for (std::size_t i = 0; i < d; ++i) {
                    step_lower[i] += ws.lower[i];
                    step_upper[i] += ws.upper[i];
                }
                model.jump_coefficient(state, ws.rho);
                check_finite(ws.rho, k, "jump coefficient");
                const double amount = j.size * ws.rho[j.component];
                state[j.component] += amount;
                check_finite(state, k, "state");
                reflect_box_inplace(state, model.domain, ws.lower, ws.upper);
                for (std::size_t i = 0; i < d; ++i) {
                    step_lower[i] += ws.lower[i];
                    step_upper[i] += ws.upper[i];
                }
                step_jump[j.component] += amount;
                ++step_count[j.component];
                b.jumps.push_back(JumpRecord{j, k, amount});
                t_cur += s;
            }
            diffuse_and_reflect(model, state, dW_rest, t1 - t_cur, input, k, ws);
            for (std::size_t i = 0; i < d; ++i) {
                step_lower[i] += ws.lower[i];
                step_upper[i] += ws.upper[i];
            }
        }

        for (std::size_t i = 0; i < d; ++i) {
            b.states[i][k + 1] = state[i];
            b.phi_lower[i][k + 1] = b.phi_lower[i][k] + step_lower[i];
            b.phi_upper[i][k + 1] = b.phi_upper[i][k] + step_upper[i];
            b.jump_total[i][k + 1] = b.jump_total[i][k] + step_jump[i];
            b.jump_count[i][k + 1] = b.jump_count[i][k] + step_count[i];
        }
    }
    return b;
}

TrajectoryBundle simulate_trajectory(const ReflectedJumpSDE& model, const SimulationGrid& grid, const SeedSpec& seed,
                                     const EngineOptions& options) {
    model.validate();
    const auto noise = sample_noise(model, grid, seed.master_seed, seed.stream_index);
    auto b = integrate(model, grid, noise, options);
    b.seed = SeedSpec{seed.master_seed, seed.stream_index, 0};
    return b;
}

}  // namespace rsde
