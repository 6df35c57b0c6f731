#include "rsde/skorokhod.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsde {

ReflectionDomain::ReflectionDomain(std::vector<Interval> bounds) : bounds_(std::move(bounds)) {
    for (const auto& b : bounds_) {
        if (std::isnan(b.lo) || std::isnan(b.hi)) {
            throw std::invalid_argument("domain bounds must not be NaN");
        }
        if (std::isfinite(b.hi) && !(b.lo < b.hi)) {
            throw std::invalid_argument("interval domain requires lo < hi");
        }
        if (b.lo == std::numeric_limits<double>::infinity() || b.hi == -std::numeric_limits<double>::infinity()) {
            throw std::invalid_argument("empty interval");
        }
    }
}

ReflectionDomain ReflectionDomain::orthant(std::size_t dim, double lo) {
    return ReflectionDomain(std::vector<Interval>(dim, Interval::half_line(lo)));
}

ReflectionDomain ReflectionDomain::unconstrained(std::size_t dim) {
    return ReflectionDomain(std::vector<Interval>(dim, Interval::real_line()));
}

bool ReflectionDomain::contains(std::span<const double> x) const {
    if (x.size() != bounds_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!bounds_[i].contains(x[i])) {
            return false;
        }
    }
    return true;
}

bool ReflectionDomain::reflecting() const noexcept {
    return std::any_of(bounds_.begin(), bounds_.end(),
                       [](const Interval& b) { return std::isfinite(b.lo) || std::isfinite(b.hi); });
}

// Both the batch and streaming maps work in the shifted variable u = w - lo.
// For a step where the running minimum is active, u + phi is exactly zero, and
// otherwise u + phi > 0, so xi = lo + (u + phi) never drops below lo.

ReflectedPath reflect_path_1d(std::span<const double> w, double lo) {
    if (w.empty()) {
        throw std::invalid_argument("reflect_path_1d: empty path");
    }
    if (!std::isfinite(lo)) {
        throw std::invalid_argument("reflect_path_1d: barrier must be finite");
    }
    if (!(w[0] >= lo)) {
        throw std::invalid_argument("reflect_path_1d: initial value lies below the barrier");
    }
    const std::size_t n = w.size();
    std::vector<double> running_min(n);
    running_min[0] = w[0] - lo;
    for (std::size_t k = 1; k < n; ++k) {
        running_min[k] = std::min(running_min[k - 1], w[k] - lo);
    }

    ReflectedPath out;
    out.xi.resize(n);
    out.phi.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.phi[k] = 0.0 - std::min(running_min[k], 0.0);
        out.xi[k] = lo + ((w[k] - lo) + out.phi[k]);
    }
    out.phi_tv = total_variation(out.phi);
    return out;
}

RunningMinimumReflector::RunningMinimumReflector(double w0, double lo) : lo_(lo) {
    if (!std::isfinite(lo)) {
        throw std::invalid_argument("reflector barrier must be finite");
    }
    if (!(w0 >= lo)) {
        throw std::invalid_argument("reflector: initial value lies below the barrier");
    }
    running_min_ = w0 - lo;
    phi_ = 0.0 - std::min(running_min_, 0.0);
    xi_ = lo + ((w0 - lo) + phi_);
}

RunningMinimumReflector::Output RunningMinimumReflector::push(double next_w) noexcept {
    const double u = next_w - lo_;
    running_min_ = std::min(running_min_, u);
    phi_ = 0.0 - std::min(running_min_, 0.0);
    xi_ = lo_ + (u + phi_);
    return {xi_, phi_};
}

void reflect_box_inplace(std::span<double> point, const ReflectionDomain& domain, std::span<double> lower_increment,
                         std::span<double> upper_increment) {
    const auto bounds = domain.bounds();
    if (point.size() != bounds.size() || lower_increment.size() != bounds.size() ||
        upper_increment.size() != bounds.size()) {
        throw std::invalid_argument("reflect_box: dimension mismatch");
    }
    for (std::size_t i = 0; i < point.size(); ++i) {
        lower_increment[i] = 0.0;
        upper_increment[i] = 0.0;
        if (point[i] < bounds[i].lo) {
            lower_increment[i] = bounds[i].lo - point[i];
            point[i] = bounds[i].lo;
        } else if (point[i] > bounds[i].hi) {
            upper_increment[i] = point[i] - bounds[i].hi;
            point[i] = bounds[i].hi;
        }
    }
}

BoxReflection reflect_box(std::span<const double> proposal, const ReflectionDomain& domain) {
    BoxReflection out;
    out.point.assign(proposal.begin(), proposal.end());
    out.lower_increment.resize(proposal.size());
    out.upper_increment.resize(proposal.size());
    reflect_box_inplace(out.point, domain, out.lower_increment, out.upper_increment);
    return out;
}

std::vector<double> total_variation(std::span<const double> phi) {
    std::vector<double> tv(phi.size(), 0.0);
    for (std::size_t k = 1; k < phi.size(); ++k) {
        tv[k] = tv[k - 1] + std::abs(phi[k] - phi[k - 1]);
    }
    return tv;
}

}  // namespace rsde
