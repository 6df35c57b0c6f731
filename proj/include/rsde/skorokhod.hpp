#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace rsde {

/// Bounds of one coordinate: [lo, hi] with hi = +inf for a half-line and
/// lo = -inf for an unconstrained side.
struct Interval {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();

    static Interval half_line(double lo) { return {lo, std::numeric_limits<double>::infinity()}; }
    static Interval real_line() {
        return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    }

    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned product domain. Inward normals are coordinate unit vectors.
class ReflectionDomain {
public:
    ReflectionDomain() = default;
    explicit ReflectionDomain(std::vector<Interval> bounds);

    static ReflectionDomain orthant(std::size_t dim, double lo = 0.0);
    static ReflectionDomain unconstrained(std::size_t dim);

    std::size_t dimension() const noexcept { return bounds_.size(); }
    const Interval& operator[](std::size_t i) const { return bounds_.at(i); }
    std::span<const Interval> bounds() const noexcept { return bounds_; }

    bool contains(std::span<const double> x) const;
    bool reflecting() const noexcept;

    friend bool operator==(const ReflectionDomain&, const ReflectionDomain&) = default;

private:
    std::vector<Interval> bounds_;
};

/// One coordinate of a solution of the Skorokhod problem on the grid.
struct ReflectedPath {
    std::vector<double> xi;      // reflected path, values >= lo
    std::vector<double> phi;     // reflection term, phi(0) = 0
    std::vector<double> phi_tv;  // running total variation |phi|_t
};

/// Exact one-dimensional Skorokhod map at a lower barrier:
/// phi(t) = -min(0, min_{s<=t}(w(s) - lo)), xi = w + phi.
/// Throws std::invalid_argument if w is empty or w(0) < lo.
ReflectedPath reflect_path_1d(std::span<const double> w, double lo = 0.0);

/// Streaming form of reflect_path_1d. Outputs are bitwise identical to the
/// batch map on every prefix.
class RunningMinimumReflector {
public:
    struct Output {
        double xi;
        double phi;
    };

    /// Starts the map at w(0). Throws if w0 < lo.
    RunningMinimumReflector(double w0, double lo = 0.0);

    Output current() const noexcept { return {xi_, phi_}; }
    Output push(double next_w) noexcept;

private:
    double lo_;
    double running_min_;  // min over the prefix of (w - lo)
    double xi_;
    double phi_;
};

/// Per-coordinate result of one projected step.
struct BoxReflection {
    std::vector<double> point;
    std::vector<double> lower_increment;  // push from the lower face (>= 0)
    std::vector<double> upper_increment;  // push from the upper face (>= 0)
};

/// Per-step projection onto an axis-aligned box: each coordinate of the
/// proposed point is pushed back to whichever face it crossed.
BoxReflection reflect_box(std::span<const double> proposal, const ReflectionDomain& domain);

/// In-place variant used by the stepping loop; increments are written to the
/// spans, which must have the domain's dimension.
void reflect_box_inplace(std::span<double> point, const ReflectionDomain& domain, std::span<double> lower_increment,
                         std::span<double> upper_increment);

/// Running total variation sum |phi(t_k) - phi(t_{k-1})|.
std::vector<double> total_variation(std::span<const double> phi);

}  // namespace rsde
