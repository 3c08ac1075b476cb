#pragma once

// Euclidean state-space primitives: states, boxes, worlds of axis-aligned
// obstacles, uniform and informed sampling, and informed-set hypervolume.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace aptstar {

using State = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline void requireSameDimension(const State& a, const State& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    }
}

[[nodiscard]] inline double distance(const State& a, const State& b) {
    requireSameDimension(a, b);
    return (a - b).norm();
}

[[nodiscard]] inline bool isFinite(const State& x) noexcept { return x.allFinite(); }

/// Closed axis-aligned hyperrectangle [lo, hi].
class Box {
public:
    Box() = default;

    Box(State lo, State hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        requireSameDimension(lo_, hi_);
        if (lo_.size() == 0) throw std::invalid_argument("box must have dimension >= 1");
        if (!isFinite(lo_) || !isFinite(hi_)) throw std::invalid_argument("box corners must be finite");
        if ((lo_.array() > hi_.array()).any()) throw std::invalid_argument("box min corner exceeds max corner");
    }

    static Box unitCube(int n) { return {State::Zero(n), State::Ones(n)}; }

    [[nodiscard]] const State& lo() const noexcept { return lo_; }
    [[nodiscard]] const State& hi() const noexcept { return hi_; }
    [[nodiscard]] int dimension() const noexcept { return static_cast<int>(lo_.size()); }

    [[nodiscard]] bool contains(const State& x) const noexcept {
        return x.size() == lo_.size() && (x.array() >= lo_.array()).all() && (x.array() <= hi_.array()).all();
    }

    [[nodiscard]] bool intersects(const Box& other) const noexcept {
        return other.dimension() == dimension() && (other.lo_.array() <= hi_.array()).all() &&
               (lo_.array() <= other.hi_.array()).all();
    }

    [[nodiscard]] double volume() const noexcept { return (hi_ - lo_).prod(); }
    [[nodiscard]] double diagonal() const noexcept { return (hi_ - lo_).norm(); }

    friend bool operator==(const Box& a, const Box& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

private:
    State lo_;
    State hi_;
};

/// Bounded state space X with obstacle set X_obs. Obstacles are closed: their
/// boundary counts as in collision.
class World {
public:
    World() = default;

    explicit World(Box bounds, std::vector<Box> obstacles = {})
        : bounds_(std::move(bounds)), obstacles_(std::move(obstacles)) {
        for (const auto& o : obstacles_) {
            if (o.dimension() != bounds_.dimension()) throw std::invalid_argument("obstacle dimension mismatch");
            if (!bounds_.intersects(o)) throw std::invalid_argument("obstacle does not intersect the bounds");
        }
    }

    [[nodiscard]] const Box& bounds() const noexcept { return bounds_; }
    [[nodiscard]] const std::vector<Box>& obstacles() const noexcept { return obstacles_; }
    [[nodiscard]] int dimension() const noexcept { return bounds_.dimension(); }

    /// Default edge-check resolution: 1e-3 of the bounds diagonal.
    [[nodiscard]] double defaultResolution() const noexcept { return 1e-3 * bounds_.diagonal(); }

    friend bool operator==(const World& a, const World& b) {
        return a.bounds_ == b.bounds_ && a.obstacles_ == b.obstacles_;
    }

private:
    Box bounds_;
    std::vector<Box> obstacles_;
};

[[nodiscard]] inline bool isStateValid(const World& world, const State& x) noexcept {
    if (!world.bounds().contains(x)) return false;
    return std::none_of(world.obstacles().begin(), world.obstacles().end(),
                        [&](const Box& o) { return o.contains(x); });
}

/// Checks the segment a-b at spacing <= resolution, endpoints included. The
/// segment is walked from its lexicographically smaller endpoint so the answer
/// does not depend on argument order.
[[nodiscard]] inline bool isMotionValid(const World& world, const State& a, const State& b, double resolution) {
    if (!(resolution > 0.0)) throw std::invalid_argument("motion resolution must be positive");
    requireSameDimension(a, b);
    const bool swap = std::lexicographical_compare(b.data(), b.data() + b.size(), a.data(), a.data() + a.size());
    const State& from = swap ? b : a;
    const State& to = swap ? a : b;

    if (!isStateValid(world, from) || !isStateValid(world, to)) return false;
    const double length = (to - from).norm();
    const auto steps = static_cast<long long>(std::ceil(length / resolution));
    State x(from.size());
    for (long long i = 1; i < steps; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(steps);
        x = from + t * (to - from);
        if (!isStateValid(world, x)) return false;
    }
    return true;
}

[[nodiscard]] inline State sampleUniform(const Box& bounds, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    State x(bounds.dimension());
    for (int i = 0; i < x.size(); ++i) {
        const double span = bounds.hi()[i] - bounds.lo()[i];
        // Clamp guards against lo + u*span rounding past hi.
        x[i] = std::min(bounds.hi()[i], bounds.lo()[i] + unit(rng) * span);
    }
    return x;
}

[[nodiscard]] inline double unitBallVolume(int n) {
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

/// Hypervolume of the prolate hyperspheroid with transverse diameter c_i and
/// focal distance c_min.
[[nodiscard]] inline double lebesgueMeasure(double c_i, double c_min, int n) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(c_min > 0.0)) throw std::invalid_argument("c_min must be positive");
    if (std::isinf(c_i)) return kInfinity;
    if (c_i < c_min) throw std::domain_error("cost below the straight-line lower bound");
    const double conjugate = std::sqrt(c_i * c_i - c_min * c_min);
    return std::pow(std::numbers::pi, 0.5 * n) * c_i * std::pow(conjugate, n - 1) /
           (std::ldexp(1.0, n) * std::tgamma(0.5 * n + 1.0));
}

/// Two-focus set {x : |x - a| + |x - b| < c}. c = +inf means "no solution yet".
class InformedSet {
public:
    InformedSet(State focus_a, State focus_b, double c_current)
        : a_(std::move(focus_a)), b_(std::move(focus_b)), c_(c_current) {
        requireSameDimension(a_, b_);
        c_min_ = (a_ - b_).norm();
        if (c_ < c_min_) throw std::domain_error("informed set cost below focal distance");
    }

    [[nodiscard]] const State& focusA() const noexcept { return a_; }
    [[nodiscard]] const State& focusB() const noexcept { return b_; }
    [[nodiscard]] double cost() const noexcept { return c_; }
    [[nodiscard]] double minCost() const noexcept { return c_min_; }
    [[nodiscard]] bool bounded() const noexcept { return std::isfinite(c_); }
    [[nodiscard]] int dimension() const noexcept { return static_cast<int>(a_.size()); }

    [[nodiscard]] double focalSum(const State& x) const { return distance(x, a_) + distance(x, b_); }
    [[nodiscard]] bool contains(const State& x) const { return focalSum(x) < c_; }

    [[nodiscard]] double measure() const { return lebesgueMeasure(c_, c_min_, dimension()); }

private:
    State a_;
    State b_;
    double c_;
    double c_min_ = 0.0;
};

namespace detail {

// Uniform point in the unit n-ball: Gaussian direction, radius u^(1/n).
inline State sampleUnitBall(int n, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    State v(n);
    double norm = 0.0;
    do {
        for (int i = 0; i < n; ++i) v[i] = gauss(rng);
        norm = v.norm();
    } while (norm == 0.0);
    return v * (std::pow(unit(rng), 1.0 / n) / norm);
}

// Applies the Householder reflection sending e_1 to `axis` (unit length).
inline State alignFirstAxis(const State& y, const State& axis) {
    State v = axis;
    v[0] -= 1.0;
    const double vv = v.squaredNorm();
    if (vv < 1e-300) return y;
    return y - (2.0 * v.dot(y) / vv) * v;
}

}  // namespace detail

/// Uniform sample from the informed set intersected with `bounds`. Falls back
/// to uniform sampling when the set is unbounded. Throws if no in-bounds
/// member is found within `max_attempts` draws.
[[nodiscard]] inline State sampleInformed(const InformedSet& set, const Box& bounds, Rng& rng,
                                          int max_attempts = 100000) {
    if (!set.bounded()) return sampleUniform(bounds, rng);
    const int n = set.dimension();
    const double c = set.cost();
    const double c_min = set.minCost();
    const State center = 0.5 * (set.focusA() + set.focusB());
    State axis = set.focusB() - set.focusA();
    if (c_min > 0.0) {
        axis /= c_min;
    } else {
        axis = State::Unit(n, 0);
    }
    const double transverse = 0.5 * c;
    const double conjugate = 0.5 * std::sqrt(c * c - c_min * c_min);

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        State y = detail::sampleUnitBall(n, rng);
        y[0] *= transverse;
        for (int i = 1; i < n; ++i) y[i] *= conjugate;
        State x = center + detail::alignFirstAxis(y, axis);
        if (set.contains(x) && bounds.contains(x)) return x;
    }
    throw std::runtime_error("informed sampling found no in-bounds member of the informed set");
}

/// Overload without bounds: samples the informed set in free space ℝⁿ.
[[nodiscard]] inline State sampleInformed(const InformedSet& set, Rng& rng) {
    if (!set.bounded()) throw std::invalid_argument("unbounded informed set needs sampling bounds");
    const int n = set.dimension();
    return sampleInformed(set, Box(State::Constant(n, -1e300), State::Constant(n, 1e300)), rng);
}

}  // namespace aptstar
