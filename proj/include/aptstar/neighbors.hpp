#pragma once

// Force-prolated r-nearest-neighbour search.
//
// Every sample carries a charge q. Around a query state x, free samples pull
// and in-collision samples push with magnitude k_e q^2 / r_i^(n-1). The net
// force F stretches the isotropic RGG ball of radius r into a prolate
// hyperspheroid: semi-axis d_1 = r (1 + k |F|) along F, all other semi-axes r.
// The query repeatedly recomputes F over the surviving candidates and drops
// those outside the spheroid until the in-collision fraction falls below a
// threshold, then returns the free survivors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "aptstar/geometry.hpp"

namespace aptstar {

struct ChargedSample {
    State state;
    bool valid = true;
    double charge = 0.0;
};

using ForceVector = Eigen::VectorXd;
using Frame = Eigen::MatrixXd;

struct EllipsoidRegion {
    State center;
    Frame frame;             // columns u_1..u_n, u_1 along the force
    Eigen::VectorXd semi_axes;  // d_1 >= d_2 = ... = d_n = r

    [[nodiscard]] int dimension() const noexcept { return static_cast<int>(center.size()); }
};

struct NeighborConfig {
    double k_e = 1.0;
    /// Prolongation gain k. Default 1 / (k_e q_max^2) with q_max = 1.9.
    double k = defaultGain(1.0, 1.9);
    double phi_threshold = 0.1;
    int max_shrink_rounds = 16;
    /// Lower clamp δ on pair distances in the force sum.
    double min_pair_distance = 1e-6;
    /// Cap on d_1 / r.
    double max_prolongation = 3.0;

    static constexpr double defaultGain(double k_e, double q_max) { return 1.0 / (k_e * q_max * q_max); }

    void validate() const {
        if (!(phi_threshold > 0.0 && phi_threshold <= 1.0)) throw std::invalid_argument("phi_threshold must be in (0,1]");
        if (!(min_pair_distance > 0.0)) throw std::invalid_argument("min_pair_distance must be positive");
        if (!(max_prolongation >= 1.0)) throw std::invalid_argument("max_prolongation must be >= 1");
        if (max_shrink_rounds < 1) throw std::invalid_argument("max_shrink_rounds must be >= 1");
        if (!(k >= 0.0) || !(k_e >= 0.0)) throw std::invalid_argument("force gains must be non-negative");
    }
};

/// RGG connection radius for a batch of `batch_size` samples. The measure of
/// the informed set is capped by the measure of the bounds; batches smaller
/// than two are treated as two so the radius stays positive.
[[nodiscard]] inline double rnnRadius(long long batch_size, int n, double informed_measure, double bounds_measure,
                                      double eta) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    const double b = static_cast<double>(std::max<long long>(batch_size, 2));
    const double measure = std::min(informed_measure, bounds_measure);
    const double inner = (1.0 + 1.0 / n) * (measure / unitBallVolume(n)) * (std::log(b) / b);
    return 2.0 * eta * std::pow(inner, 1.0 / n);
}

/// Net virtual Coulomb force on `x`. `charge_of(sample)` supplies q.
template <class ChargeOf>
[[nodiscard]] ForceVector coulombForce(const State& x, std::span<const ChargedSample> pool,
                                       std::span<const std::size_t> members, const NeighborConfig& config,
                                       ChargeOf&& charge_of) {
    const auto n = x.size();
    ForceVector force = ForceVector::Zero(n);
    for (std::size_t id : members) {
        const ChargedSample& s = pool[id];
        requireSameDimension(x, s.state);
        const double r = (s.state - x).norm();
        if (r == 0.0) continue;  // no direction
        const double q = charge_of(s);
        const double magnitude = config.k_e * q * q / std::pow(std::max(r, config.min_pair_distance), n - 1);
        const double scale = (s.valid ? magnitude : -magnitude) / r;
        force.noalias() += scale * (s.state - x);
    }
    return force;
}

[[nodiscard]] inline ForceVector coulombForce(const State& x, std::span<const ChargedSample> neighbors,
                                              const NeighborConfig& config) {
    std::vector<std::size_t> all(neighbors.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return coulombForce(x, neighbors, all, config, [](const ChargedSample& s) { return s.charge; });
}

/// Orthonormal frame whose first column is f / |f|; the rest come from
/// Gram-Schmidt over the standard basis, least-aligned axes first. A zero
/// force yields the identity.
[[nodiscard]] inline Frame orthonormalFrame(const ForceVector& f) {
    const auto n = f.size();
    const double norm = f.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) return Frame::Identity(n, n);

    Frame q(n, n);
    q.col(0) = f / norm;
    std::vector<Eigen::Index> axes(static_cast<std::size_t>(n));
    std::iota(axes.begin(), axes.end(), Eigen::Index{0});
    std::stable_sort(axes.begin(), axes.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::abs(q(a, 0)) < std::abs(q(b, 0)); });

    Eigen::Index filled = 1;
    for (Eigen::Index axis : axes) {
        if (filled == n) break;
        Eigen::VectorXd v = Eigen::VectorXd::Unit(n, axis);
        for (int pass = 0; pass < 2; ++pass) {  // re-orthogonalize once
            for (Eigen::Index c = 0; c < filled; ++c) v -= q.col(c).dot(v) * q.col(c);
        }
        const double vn = v.norm();
        if (vn < 1e-8) continue;
        q.col(filled++) = v / vn;
    }
    return q;
}

[[nodiscard]] inline Eigen::VectorXd prolateAxes(double r, const ForceVector& f, const NeighborConfig& config) {
    if (!(r > 0.0)) throw std::invalid_argument("base radius must be positive");
    Eigen::VectorXd d = Eigen::VectorXd::Constant(f.size(), r);
    if (f.size() > 0) d[0] = std::min(r * (1.0 + config.k * f.norm()), r * config.max_prolongation);
    return d;
}

[[nodiscard]] inline EllipsoidRegion makeRegion(const State& center, double r, const ForceVector& f,
                                                const NeighborConfig& config) {
    return {center, orthonormalFrame(f), prolateAxes(r, f, config)};
}

/// Strict interior test (x_i - x)^T Q D^-2 Q^T (x_i - x) < 1. With equal
/// semi-axes this is exactly |x_i - x| < r.
[[nodiscard]] inline bool inEllipse(const State& center, const State& x_i, const EllipsoidRegion& region) {
    requireSameDimension(center, x_i);
    const auto& d = region.semi_axes;
    if (d.size() != center.size()) throw std::invalid_argument("region dimension mismatch");
    if ((d.array() == d[0]).all()) return distance(center, x_i) < d[0];
    double form = 0.0;
    for (Eigen::Index j = 0; j < d.size(); ++j) {
        const double y = region.frame.col(j).dot(x_i - center);
        form += (y / d[j]) * (y / d[j]);
    }
    return form < 1.0;
}

/// Normalized geometric-mean eccentricity sqrt(1 - r / (prod d_i)^(1/n)).
[[nodiscard]] inline double eccentricity(const EllipsoidRegion& region, double r) {
    const auto& d = region.semi_axes;
    if (d.size() == 0) throw std::invalid_argument("empty region");
    if ((d.array() < r).any()) throw std::domain_error("semi-axis shorter than the base radius");
    if ((d.array() == r).all()) return 0.0;
    const double geometric_mean = std::exp(d.array().log().mean());
    return std::sqrt(std::max(0.0, 1.0 - r / geometric_mean));
}

struct NeighborQuery {
    std::vector<std::size_t> neighbors;  // valid pool indices, ascending
    EllipsoidRegion region;
    double force_norm = 0.0;
    int rounds = 0;
};

/// Shrink loop over an explicit candidate list (pool indices). Candidates are
/// processed in ascending index order so results do not depend on how the
/// caller gathered them. Samples beyond max_prolongation * r can never be
/// returned, so callers may pre-filter to that radius.
template <class ChargeOf>
[[nodiscard]] NeighborQuery ellipticalNearestNeighbors(const State& x, std::span<const ChargedSample> pool,
                                                       std::vector<std::size_t> candidates, double r,
                                                       const NeighborConfig& config, ChargeOf&& charge_of,
                                                       std::ostream* trace = nullptr) {
    NeighborQuery result;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    result.region = EllipsoidRegion{x, Frame::Identity(x.size(), x.size()), Eigen::VectorXd::Constant(x.size(), r)};

    double phi = 1.0;
    std::vector<std::size_t> kept;
    while (phi >= config.phi_threshold && result.rounds < config.max_shrink_rounds) {
        ++result.rounds;
        const ForceVector force = coulombForce(x, pool, candidates, config, charge_of);
        result.force_norm = force.norm();
        result.region = makeRegion(x, r, force, config);

        kept.clear();
        std::size_t invalid = 0;
        for (std::size_t id : candidates) {
            if (inEllipse(x, pool[id].state, result.region)) {
                kept.push_back(id);
                if (!pool[id].valid) ++invalid;
            }
        }
        const bool unchanged = kept.size() == candidates.size();
        candidates.swap(kept);
        if (candidates.empty()) {
            if (trace) *trace << result.rounds << ' ' << 0 << ' ' << 0 << ' ' << 0 << ' ' << result.force_norm << ' '
                              << result.region.semi_axes[0] / r << '\n';
            return result;
        }
        phi = static_cast<double>(invalid) / static_cast<double>(candidates.size());
        if (trace) {
            *trace << result.rounds << ' ' << candidates.size() << ' ' << invalid << ' ' << phi << ' '
                   << result.force_norm << ' ' << result.region.semi_axes[0] / r << '\n';
        }
        // A round that removed nothing is a fixed point: later rounds would
        // recompute the same force and region.
        if (unchanged) break;
    }

    for (std::size_t id : candidates) {
        if (pool[id].valid) result.neighbors.push_back(id);
    }
    return result;
}

/// Linear-scan variant over the whole pool.
template <class ChargeOf>
[[nodiscard]] NeighborQuery ellipticalNearestNeighbors(const State& x, std::span<const ChargedSample> pool, double r,
                                                       const NeighborConfig& config, ChargeOf&& charge_of,
                                                       std::ostream* trace = nullptr) {
    std::vector<std::size_t> candidates;
    const double reach = config.max_prolongation * r;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (distance(x, pool[i].state) <= reach) candidates.push_back(i);
    }
    return ellipticalNearestNeighbors(x, pool, std::move(candidates), r, config, std::forward<ChargeOf>(charge_of),
                                      trace);
}

[[nodiscard]] inline NeighborQuery ellipticalNearestNeighbors(const State& x, std::span<const ChargedSample> pool,
                                                              double r, const NeighborConfig& config) {
    return ellipticalNearestNeighbors(x, pool, r, config, [](const ChargedSample& s) { return s.charge; });
}

}  // namespace aptstar
