#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rsde/engine.hpp"

namespace rsde {

/// Per-time, per-coordinate ensemble statistics.
struct EnsembleStats {
    std::size_t n_paths = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> mean;      // [coordinate][point]
    std::vector<std::vector<double>> variance;  // unbiased; 0 when n_paths == 1
    std::vector<double> mean_path_max;          // per coordinate: E[max_t X_i(t)]
};

struct EnsembleOptions {
    EngineOptions engine;
    std::size_t retain = 0;  // number of leading trajectories kept in full
};

struct EnsembleResult {
    EnsembleStats stats;
    std::vector<TrajectoryBundle> retained;
};

/// Trajectory i uses stream index i under `master_seed`. Trajectories run in
/// parallel (OpenMP) in fixed-size chunks whose moment accumulators are merged
/// by a fixed pairwise tree, so the result does not depend on the thread
/// count or scheduling.
EnsembleResult simulate_ensemble(const ReflectedJumpSDE& model, const SimulationGrid& grid, std::size_t n_paths,
                                 std::uint64_t master_seed, const EnsembleOptions& options = {});

/// Serial reference: runs the trajectories in order and computes the moments
/// with the textbook two-pass estimator. Kept for testing the parallel path.
EnsembleResult simulate_ensemble_serial(const ReflectedJumpSDE& model, const SimulationGrid& grid,
                                        std::size_t n_paths, std::uint64_t master_seed,
                                        const EnsembleOptions& options = {});

/// Chunk size of the parallel reduction.
inline constexpr std::size_t kEnsembleChunk = 16;

}  // namespace rsde
