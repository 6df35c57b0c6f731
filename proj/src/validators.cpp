#include "rsde/validators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsde {

namespace {

double norm1(std::span<const double> u) {
    double s = 0.0;
    for (double v : u) {
        s += std::abs(v);
    }
    return s;
}

double distance1(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::abs(a[i] - b[i]);
    }
    return s;
}

std::vector<double> uniform_point(const Box& box, std::mt19937_64& engine) {
    std::vector<double> x(box.dimension());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::uniform_real_distribution<double>(box.lo[i], box.hi[i])(engine);
    }
    return x;
}

std::vector<std::vector<double>> corners_and_centre(const Box& box) {
    const std::size_t d = box.dimension();
    std::vector<std::vector<double>> pts;
    if (d <= 10) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
            std::vector<double> c(d);
            for (std::size_t i = 0; i < d; ++i) {
                c[i] = (mask >> i) & 1U ? box.hi[i] : box.lo[i];
            }
            pts.push_back(std::move(c));
        }
    }
    std::vector<double> mid(d);
    for (std::size_t i = 0; i < d; ++i) {
        mid[i] = 0.5 * (box.lo[i] + box.hi[i]);
    }
    pts.push_back(std::move(mid));
    return pts;
}

}  // namespace

void Box::validate() const {
    if (lo.empty() || lo.size() != hi.size()) {
        throw std::invalid_argument("box bounds must be non-empty and of equal size");
    }
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(lo[i] < hi[i])) {
            throw std::invalid_argument("box must be bounded with lo < hi");
        }
    }
}

LipschitzEstimate estimate_lipschitz_constant(const VectorFunction& fn, const Box& box, std::size_t n_samples,
                                              std::uint64_t seed) {
    box.validate();
    auto engine = make_engine(SeedSpec{seed, 0, 0});
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    LipschitzEstimate est;
    for (std::size_t s = 0; s < n_samples; ++s) {
        auto x = uniform_point(box, engine);
        std::vector<double> z;
        if (s % 2 == 0) {
            z = uniform_point(box, engine);
        } else {
            z = x;
            for (std::size_t i = 0; i < z.size(); ++i) {
                const double h = 1e-4 * (box.hi[i] - box.lo[i]);
                z[i] = std::clamp(x[i] + h * unit(engine), box.lo[i], box.hi[i]);
            }
        }
        const double dx = distance1(x, z);
        if (dx == 0.0) {
            continue;
        }
        const auto fx = fn(x);
        const auto fz = fn(z);
        est.constant = std::max(est.constant, distance1(fx, fz) / dx);
        ++est.samples;
    }
    return est;
}

JumpBoundCheck check_jump_coefficient_bound(const JumpResponse& rho, const CompoundPoissonSpec& spec, const Box& box,
                                            std::size_t n_samples, std::uint64_t seed, std::size_t n_states) {
    box.validate();
    spec.validate();
    if (n_samples == 0) {
        throw std::invalid_argument("need at least one jump sample");
    }
    auto engine = make_engine(SeedSpec{seed, 0, 1});
    std::vector<double> sizes(n_samples);
    for (double& y : sizes) {
        y = draw_jump_size(spec.jump_dist, engine);
    }
    auto states = corners_and_centre(box);
    for (std::size_t s = 0; s < n_states; ++s) {
        states.push_back(uniform_point(box, engine));
    }

    const double inv_n = 1.0 / static_cast<double>(n_samples);
    JumpBoundCheck out;
    out.jump_samples = n_samples;
    out.state_samples = states.size();

    for (const auto& x : states) {
        double second = 0.0;
        for (double y : sizes) {
            const double v = norm1(rho(x, y));
            second += v * v;
        }
        const double nx = norm1(x);
        out.growth_ratio = std::max(out.growth_ratio, second * inv_n / (1.0 + nx * nx));
    }
    for (std::size_t a = 0; a < states.size(); ++a) {
        const std::size_t b = (a + 1) % states.size();
        const double dx = distance1(states[a], states[b]);
        if (dx == 0.0) {
            continue;
        }
        double second = 0.0;
        for (double y : sizes) {
            const auto ra = rho(states[a], y);
            const auto rb = rho(states[b], y);
            const double v = distance1(ra, rb);
            second += v * v;
        }
        out.lipschitz_ratio = std::max(out.lipschitz_ratio, second * inv_n / (dx * dx));
    }
    out.c_rho = std::max(out.growth_ratio, out.lipschitz_ratio);
    out.pass = std::isfinite(out.c_rho);
    return out;
}

}  // namespace rsde
