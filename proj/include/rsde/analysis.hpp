#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rsde/engine.hpp"

namespace rsde {

/// Vector-valued path on a time grid, values[coordinate][point].
/// Vector norms use |u| = sum |u_i|.
struct SampledPath {
    std::vector<double> times;
    std::vector<std::vector<double>> values;

    std::size_t points() const noexcept { return times.size(); }
    /// Throws if coordinates disagree with the time grid.
    void validate() const;
};

SampledPath path_of(const TrajectoryBundle& bundle);
SampledPath scalar_path(std::vector<double> times, std::vector<double> values);

/// Grid maximum of |h(t)|. Throws on an empty path.
double sup_norm(const SampledPath& path);

/// max over grid pairs of |h(t) - h(s)| / |t - s|^alpha. This is a lower bound
/// for the seminorm of the continuous path. Needs alpha in (0, 1) and at
/// least two points.
double holder_seminorm(const SampledPath& path, double alpha);

/// Double integral of |h(t) - h(s)|^p / |t - s|^(1 + alpha p) over [0,T]^2 by
/// the product trapezoid rule with the diagonal nodes left out. Needs p > 1,
/// alpha in (0, 1) and at least two points; alpha * p is not restricted.
double sobolev_seminorm(const SampledPath& path, double alpha, double p);

struct SeminormReport {
    double sup_norm = 0.0;
    double holder_alpha = 0.5;
    double holder_seminorm = 0.0;
    double sobolev_alpha = 0.25;
    double sobolev_p = 2.0;
    double sobolev_seminorm = 0.0;
};

SeminormReport seminorm_report(const SampledPath& path, double holder_alpha = 0.5, double sobolev_alpha = 0.25,
                               double sobolev_p = 2.0);

struct EnsembleMoments {
    std::size_t n_paths = 0;
    std::vector<std::vector<double>> mean;      // [coordinate][point]
    std::vector<std::vector<double>> variance;  // unbiased, 0 for a single path
    std::vector<double> mean_path_max;          // per coordinate: mean over paths of max_t X_i
    double mean_sup_norm = 0.0;                 // mean over paths of max_t |X(t)|
};

/// Two-pass estimators over trajectories on a common grid. Throws on an
/// empty ensemble or mismatched grids.
EnsembleMoments ensemble_moments(std::span<const TrajectoryBundle> bundles);
EnsembleMoments ensemble_moments(std::span<const SampledPath> paths);

/// Ordinary least-squares slope of log(y) against log(x); NaN if fewer than
/// two pairs have x > 0 and y > 0.
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct ExperimentOptions {
    EngineOptions engine;
    bool parallel = true;  // OpenMP over replications; false runs the serial reference loop
};

struct StabilityReport {
    std::vector<double> offsets;
    std::vector<double> perturbation_sizes;  // E|X0^k - X0|^2
    std::vector<double> errors;              // E max_t |X^k(t) - X(t)|^2
    std::vector<double> standard_errors;     // of the error estimates
    double fitted_slope = 0.0;               // log-log slope of errors vs sizes
    std::size_t n_paths = 0;
    std::uint64_t master_seed = 0;
};

/// Dependence on initial data under common random numbers: trajectory p of
/// every perturbed run reuses the noise of reference trajectory p, started at
/// x0 + offset * direction (direction defaults to all ones). Offsets must be
/// non-negative and strictly decreasing; perturbed starts must lie in the
/// domain.
StabilityReport stability_experiment(const ReflectedJumpSDE& model, const SimulationGrid& grid,
                                     std::span<const double> offsets, std::size_t n_paths, std::uint64_t master_seed,
                                     std::span<const double> direction = {}, const ExperimentOptions& options = {});

struct ConvergenceReport {
    std::vector<int> levels;
    int reference_level = 0;
    double horizon = 0.0;
    std::vector<double> dt;
    std::vector<double> rms_error;  // sqrt(E |X^n(T) - X^ref(T)|^2)
    double empirical_order = 0.0;   // log-log slope of rms_error vs dt
    std::size_t n_paths = 0;
    std::uint64_t master_seed = 0;
};

/// Strong error of the dyadic scheme at the horizon. Noise is drawn once per
/// path on the reference level (max level + reference_offset) and aggregated
/// to each coarser level, so all levels share one realisation.
ConvergenceReport strong_convergence_experiment(const ReflectedJumpSDE& model, double horizon,
                                                std::span<const int> levels, std::size_t n_paths,
                                                std::uint64_t master_seed, int reference_offset = 3,
                                                const ExperimentOptions& options = {});

}  // namespace rsde
