#include "rsde/ensemble.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>

#include "rsde/analysis.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rsde {

namespace {

// Welford accumulator over flattened [coordinate][point] samples.
struct Moments {
    std::size_t count = 0;
    std::vector<double> mean;
    std::vector<double> m2;
    std::vector<double> max_sum;  // per coordinate

    Moments(std::size_t d, std::size_t points) : mean(d * points, 0.0), m2(d * points, 0.0), max_sum(d, 0.0) {}

    void add(const TrajectoryBundle& b) {
        ++count;
        const double n = static_cast<double>(count);
        const std::size_t points = b.points();
        for (std::size_t i = 0; i < b.dimension(); ++i) {
            const auto& x = b.states[i];
            for (std::size_t k = 0; k < points; ++k) {
                const std::size_t idx = i * points + k;
                const double delta = x[k] - mean[idx];
                mean[idx] += delta / n;
                m2[idx] += delta * (x[k] - mean[idx]);
            }
            max_sum[i] += *std::max_element(x.begin(), x.end());
        }
    }

    void merge(const Moments& other) {
        if (other.count == 0) {
            return;
        }
        if (count == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(other.count);
        const double n = na + nb;
        for (std::size_t idx = 0; idx < mean.size(); ++idx) {
            const double delta = other.mean[idx] - mean[idx];
            mean[idx] += delta * nb / n;
            m2[idx] += other.m2[idx] + delta * delta * na * nb / n;
        }
        for (std::size_t i = 0; i < max_sum.size(); ++i) {
            max_sum[i] += other.max_sum[i];
        }
        count += other.count;
    }
};

// Merges adjacent pairs level by level; the tree shape depends only on the
// number of chunks.
Moments pairwise_reduce(std::vector<Moments> parts) {
    while (parts.size() > 1) {
        std::vector<Moments> next;
        next.reserve((parts.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
            parts[i].merge(parts[i + 1]);
            next.push_back(std::move(parts[i]));
        }
        if (parts.size() % 2 == 1) {
            next.push_back(std::move(parts.back()));
        }
        parts = std::move(next);
    }
    return std::move(parts.front());
}

}  // namespace

EnsembleResult simulate_ensemble(const ReflectedJumpSDE& model, const SimulationGrid& grid, std::size_t n_paths,
                                 std::uint64_t master_seed, const EnsembleOptions& options) {
    if (n_paths == 0) {
        throw std::invalid_argument("ensemble needs at least one path");
    }
    model.validate();
    const std::size_t d = model.dimension;
    const std::size_t points = grid.points();
    const std::size_t n_chunks = (n_paths + kEnsembleChunk - 1) / kEnsembleChunk;
    const std::size_t retain = std::min(options.retain, n_paths);

    std::vector<Moments> chunks(n_chunks, Moments(d, points));
    std::vector<TrajectoryBundle> retained(retain);

    // Exceptions must not escape an OpenMP region; keep the first by chunk index.
    std::vector<std::exception_ptr> errors(n_chunks);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
        const auto chunk = static_cast<std::size_t>(c);
        try {
            const std::size_t begin = chunk * kEnsembleChunk;
            const std::size_t end = std::min(n_paths, begin + kEnsembleChunk);
            for (std::size_t p = begin; p < end; ++p) {
                auto b = simulate_trajectory(model, grid, SeedSpec{master_seed, p, 0}, options.engine);
                chunks[chunk].add(b);
                if (p < retain) {
                    retained[p] = std::move(b);
                }
            }
        } catch (...) {
            errors[chunk] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    const Moments total = pairwise_reduce(std::move(chunks));
    EnsembleResult result;
    auto& s = result.stats;
    s.n_paths = n_paths;
    s.times = grid.times();
    s.mean.assign(d, std::vector<double>(points));
    s.variance.assign(d, std::vector<double>(points, 0.0));
    s.mean_path_max.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < points; ++k) {
            s.mean[i][k] = total.mean[i * points + k];
            if (n_paths > 1) {
                s.variance[i][k] = total.m2[i * points + k] / static_cast<double>(n_paths - 1);
            }
        }
        s.mean_path_max[i] = total.max_sum[i] / static_cast<double>(n_paths);
    }
    result.retained = std::move(retained);
    return result;
}

EnsembleResult simulate_ensemble_serial(const ReflectedJumpSDE& model, const SimulationGrid& grid,
                                        std::size_t n_paths, std::uint64_t master_seed,
                                        const EnsembleOptions& options) {
    if (n_paths == 0) {
        throw std::invalid_argument("ensemble needs at least one path");
    }
    std::vector<TrajectoryBundle> all;
    all.reserve(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        all.push_back(simulate_trajectory(model, grid, SeedSpec{master_seed, p, 0}, options.engine));
    }
    const auto m = ensemble_moments(all);

    EnsembleResult result;
    auto& s = result.stats;
    s.n_paths = n_paths;
    s.times = all.front().times;
    s.mean = m.mean;
    s.variance = m.variance;
    s.mean_path_max = m.mean_path_max;
    all.resize(std::min(options.retain, n_paths));
    result.retained = std::move(all);
    return result;
}

}  // namespace rsde
