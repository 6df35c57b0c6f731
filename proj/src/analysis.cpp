#include "rsde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <stdexcept>

namespace rsde {

namespace {

double dist1(const SampledPath& h, std::size_t a, std::size_t b) {
    double s = 0.0;
    for (const auto& c : h.values) {
        s += std::abs(c[a] - c[b]);
    }
    return s;
}

double norm1_at(const SampledPath& h, std::size_t k) {
    double s = 0.0;
    for (const auto& c : h.values) {
        s += std::abs(c[k]);
    }
    return s;
}

// Runs body(i) for i < n, optionally across OpenMP threads. Each replication
// writes only its own output slot, so the caller's reduction order is fixed.
template <class Body>
void for_each_replication(std::size_t n, bool parallel, Body&& body) {
    std::vector<std::exception_ptr> errors(n);
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

double terminal_distance(const TrajectoryBundle& a, const TrajectoryBundle& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        s += std::abs(a.states[i].back() - b.states[i].back());
    }
    return s;
}

}  // namespace

void SampledPath::validate() const {
    for (const auto& c : values) {
        if (c.size() != times.size()) {
            throw std::invalid_argument("path coordinate length does not match the time grid");
        }
    }
}

SampledPath path_of(const TrajectoryBundle& bundle) {
    return SampledPath{bundle.times, bundle.states};
}

SampledPath scalar_path(std::vector<double> times, std::vector<double> values) {
    SampledPath p{std::move(times), {std::move(values)}};
    p.validate();
    return p;
}

double sup_norm(const SampledPath& path) {
    path.validate();
    if (path.points() == 0 || path.values.empty()) {
        throw std::invalid_argument("sup_norm: empty path");
    }
    double m = 0.0;
    for (std::size_t k = 0; k < path.points(); ++k) {
        m = std::max(m, norm1_at(path, k));
    }
    return m;
}

double holder_seminorm(const SampledPath& path, double alpha) {
    path.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("holder_seminorm: alpha must lie in (0, 1)");
    }
    if (path.points() < 2) {
        throw std::invalid_argument("holder_seminorm: need at least two points");
    }
    const auto& t = path.times;
    double m = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            m = std::max(m, dist1(path, i, j) / std::pow(std::abs(t[j] - t[i]), alpha));
        }
    }
    return m;
}

double sobolev_seminorm(const SampledPath& path, double alpha, double p) {
    path.validate();
    if (!(p > 1.0)) {
        throw std::invalid_argument("sobolev_seminorm: p must exceed 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("sobolev_seminorm: alpha must lie in (0, 1)");
    }
    const std::size_t n = path.points();
    if (n < 2) {
        throw std::invalid_argument("sobolev_seminorm: need at least two points");
    }
    const auto& t = path.times;
    std::vector<double> w(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double half = 0.5 * (t[k + 1] - t[k]);
        w[k] += half;
        w[k + 1] += half;
    }
    const double kernel_power = 1.0 + alpha * p;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            row += w[j] * std::pow(dist1(path, i, j), p) / std::pow(t[j] - t[i], kernel_power);
        }
        sum += w[i] * row;
    }
    // integrand is symmetric in (t, s)
    return 2.0 * sum;
}

SeminormReport seminorm_report(const SampledPath& path, double holder_alpha, double sobolev_alpha, double sobolev_p) {
    SeminormReport r;
    r.sup_norm = sup_norm(path);
    r.holder_alpha = holder_alpha;
    r.sobolev_alpha = sobolev_alpha;
    r.sobolev_p = sobolev_p;
    if (path.points() >= 2) {
        r.holder_seminorm = holder_seminorm(path, holder_alpha);
        r.sobolev_seminorm = sobolev_seminorm(path, sobolev_alpha, sobolev_p);
    }
    return r;
}

EnsembleMoments ensemble_moments(std::span<const SampledPath> paths) {
    if (paths.empty()) {
        throw std::invalid_argument("ensemble_moments: empty ensemble");
    }
    const std::size_t d = paths.front().values.size();
    const std::size_t points = paths.front().points();
    for (const auto& p : paths) {
        p.validate();
        if (p.values.size() != d || p.points() != points) {
            throw std::invalid_argument("ensemble_moments: paths on different grids");
        }
    }
    const double n = static_cast<double>(paths.size());

    EnsembleMoments m;
    m.n_paths = paths.size();
    m.mean.assign(d, std::vector<double>(points, 0.0));
    m.variance.assign(d, std::vector<double>(points, 0.0));
    m.mean_path_max.assign(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < points; ++k) {
            double s = 0.0;
            for (const auto& p : paths) {
                s += p.values[i][k];
            }
            m.mean[i][k] = s / n;
        }
        if (paths.size() > 1) {
            for (std::size_t k = 0; k < points; ++k) {
                double ss = 0.0;
                for (const auto& p : paths) {
                    const double dev = p.values[i][k] - m.mean[i][k];
                    ss += dev * dev;
                }
                m.variance[i][k] = ss / (n - 1.0);
            }
        }
        double max_sum = 0.0;
        for (const auto& p : paths) {
            max_sum += *std::max_element(p.values[i].begin(), p.values[i].end());
        }
        m.mean_path_max[i] = max_sum / n;
    }
    double sup_sum = 0.0;
    for (const auto& p : paths) {
        sup_sum += sup_norm(p);
    }
    m.mean_sup_norm = sup_sum / n;
    return m;
}

EnsembleMoments ensemble_moments(std::span<const TrajectoryBundle> bundles) {
    std::vector<SampledPath> paths;
    paths.reserve(bundles.size());
    for (const auto& b : bundles) {
        paths.push_back(path_of(b));
    }
    return ensemble_moments(std::span<const SampledPath>(paths));
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

StabilityReport stability_experiment(const ReflectedJumpSDE& model, const SimulationGrid& grid,
                                     std::span<const double> offsets, std::size_t n_paths, std::uint64_t master_seed,
                                     std::span<const double> direction, const ExperimentOptions& options) {
    model.validate();
    if (n_paths == 0) {
        throw std::invalid_argument("stability_experiment: need at least one path");
    }
    if (offsets.empty()) {
        throw std::invalid_argument("stability_experiment: no offsets");
    }
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        if (!(offsets[k] >= 0.0) || (k > 0 && !(offsets[k] < offsets[k - 1]))) {
            throw std::invalid_argument("stability_experiment: offsets must be >= 0 and strictly decreasing");
        }
    }
    const std::size_t d = model.dimension;
    std::vector<double> dir(direction.begin(), direction.end());
    if (dir.empty()) {
        dir.assign(d, 1.0);
    }
    if (dir.size() != d) {
        throw std::invalid_argument("stability_experiment: direction has the wrong dimension");
    }

    StabilityReport report;
    report.offsets.assign(offsets.begin(), offsets.end());
    report.n_paths = n_paths;
    report.master_seed = master_seed;

    std::vector<std::vector<double>> starts;
    for (double off : offsets) {
        std::vector<double> x(d);
        double size = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            x[i] = model.x0[i] + off * dir[i];
            size += std::abs(x[i] - model.x0[i]);
        }
        if (!model.domain.contains(x)) {
            throw std::invalid_argument("stability_experiment: perturbed initial state leaves the domain");
        }
        starts.push_back(std::move(x));
        report.perturbation_sizes.push_back(size * size);
    }

    // per_path[p][k] = max_t |X^k(t) - X(t)|^2 on trajectory p
    std::vector<std::vector<double>> per_path(n_paths, std::vector<double>(offsets.size(), 0.0));
    for_each_replication(n_paths, options.parallel, [&](std::size_t p) {
        const auto noise = sample_noise(model, grid, master_seed, p);
        const auto reference = integrate(model, grid, noise, options.engine);
        for (std::size_t k = 0; k < starts.size(); ++k) {
            const auto perturbed = integrate(model, grid, noise, options.engine, starts[k]);
            double worst = 0.0;
            for (std::size_t t = 0; t < reference.points(); ++t) {
                double dist = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    dist += std::abs(perturbed.states[i][t] - reference.states[i][t]);
                }
                worst = std::max(worst, dist * dist);
            }
            per_path[p][k] = worst;
        }
    });

    const double n = static_cast<double>(n_paths);
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        double s = 0.0;
        for (const auto& row : per_path) {
            s += row[k];
        }
        const double mean = s / n;
        double ss = 0.0;
        for (const auto& row : per_path) {
            ss += (row[k] - mean) * (row[k] - mean);
        }
        report.errors.push_back(mean);
        report.standard_errors.push_back(n_paths > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0);
    }
    report.fitted_slope = loglog_slope(report.perturbation_sizes, report.errors);
    return report;
}

ConvergenceReport strong_convergence_experiment(const ReflectedJumpSDE& model, double horizon,
                                                std::span<const int> levels, std::size_t n_paths,
                                                std::uint64_t master_seed, int reference_offset,
                                                const ExperimentOptions& options) {
    model.validate();
    if (levels.empty() || n_paths == 0) {
        throw std::invalid_argument("strong_convergence_experiment: need levels and paths");
    }
    for (std::size_t i = 1; i < levels.size(); ++i) {
        if (!(levels[i] > levels[i - 1])) {
            throw std::invalid_argument("strong_convergence_experiment: levels must be increasing");
        }
    }
    if (reference_offset < 1) {
        throw std::invalid_argument("strong_convergence_experiment: reference must be finer than all levels");
    }
    ConvergenceReport report;
    report.levels.assign(levels.begin(), levels.end());
    report.reference_level = levels.back() + reference_offset;
    report.horizon = horizon;
    report.n_paths = n_paths;
    report.master_seed = master_seed;

    const auto ref_grid = SimulationGrid::dyadic(report.reference_level, horizon);
    std::vector<SimulationGrid> grids;
    for (int level : levels) {
        grids.push_back(SimulationGrid::dyadic(level, horizon));
        report.dt.push_back(grids.back().dt());
    }

    std::vector<std::vector<double>> sq_err(n_paths, std::vector<double>(levels.size(), 0.0));
    for_each_replication(n_paths, options.parallel, [&](std::size_t p) {
        const auto fine = sample_noise(model, ref_grid, master_seed, p);
        const auto reference = integrate(model, ref_grid, fine, options.engine);
        for (std::size_t l = 0; l < levels.size(); ++l) {
            const std::size_t factor = std::size_t{1} << (report.reference_level - levels[l]);
            const auto coarse = integrate(model, grids[l], coarsen(fine, factor), options.engine);
            const double e = terminal_distance(coarse, reference);
            sq_err[p][l] = e * e;
        }
    });

    for (std::size_t l = 0; l < levels.size(); ++l) {
        double s = 0.0;
        for (const auto& row : sq_err) {
            s += row[l];
        }
        report.rms_error.push_back(std::sqrt(s / static_cast<double>(n_paths)));
    }
    report.empirical_order = loglog_slope(report.dt, report.rms_error);
    return report;
}

}  // namespace rsde
