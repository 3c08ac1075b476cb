#pragma once

// Batch-size and vertex-charge scheduling.
//
// After every solution improvement the batch size is recomputed from how much
// the informed set has contracted since the first solution:
//   G = zeta(c_current) / zeta(c_initial)        informed ratio
//   sigma = sigmoid(10 (G - 1/2))                 smoothing
//   theta = ln(tau sigma + 1) / ln(tau + 1)       decay, tau = (m_max + m_min) / n
//   B = floor(m_min + theta (m_max - m_min))
// The batch size then sets the charge of every vertex in the batch: large
// batches give small charges (near-spherical neighbourhoods), small batches
// give large charges (strongly prolate neighbourhoods).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "aptstar/bernoulli.hpp"
#include "aptstar/geometry.hpp"

namespace aptstar {

struct BatchConfig {
    long long m_min = 1;
    long long m_max = 2 * kDefaultBatch - 1;
    int n_dim = 2;

    static constexpr long long kDefaultBatch = 100;

    /// m_max = 2 m_default - m_min.
    static BatchConfig fromDefault(long long m_default, int n_dim, long long m_min = 1) {
        return {m_min, 2 * m_default - m_min, n_dim};
    }

    [[nodiscard]] double tau() const { return static_cast<double>(m_max + m_min) / n_dim; }

    void validate() const {
        if (m_min < 1) throw std::invalid_argument("batch.m_min must be >= 1");
        if (m_min >= m_max) throw std::invalid_argument("batch.m_min must be < batch.m_max");
        if (n_dim < 1) throw std::invalid_argument("batch dimension must be >= 1");
    }
};

struct BatchState {
    double c_last = kInfinity;
    std::optional<double> zeta_initial;
    double zeta_current = kInfinity;
    long long batch_size = 0;
    int zeta_initial_writes = 0;
};

enum class ChargeSchedule { TanhTaylor, TanhClosed, Exponential, Polynomial, Logarithmic, Iteration };

[[nodiscard]] inline std::string_view toString(ChargeSchedule s) {
    switch (s) {
        case ChargeSchedule::TanhTaylor: return "tanh_taylor";
        case ChargeSchedule::TanhClosed: return "tanh_closed";
        case ChargeSchedule::Exponential: return "exponential";
        case ChargeSchedule::Polynomial: return "polynomial";
        case ChargeSchedule::Logarithmic: return "logarithmic";
        case ChargeSchedule::Iteration: return "iteration";
    }
    return "unknown";
}

[[nodiscard]] inline ChargeSchedule parseChargeSchedule(std::string_view name) {
    for (auto s : {ChargeSchedule::TanhTaylor, ChargeSchedule::TanhClosed, ChargeSchedule::Exponential,
                   ChargeSchedule::Polynomial, ChargeSchedule::Logarithmic, ChargeSchedule::Iteration}) {
        if (toString(s) == name) return s;
    }
    throw std::invalid_argument("unknown charge schedule: " + std::string(name));
}

struct ChargeConfig {
    double q_min = 0.1;
    double q_max = 1.9;
    double epsilon = 6.0;
    double beta = -0.5;
    int alpha = 100;
    ChargeSchedule schedule = ChargeSchedule::TanhClosed;
    /// Number of levels of the stepped ("iteration") schedule.
    int iteration_steps = 10;

    void validate() const {
        // q_min == q_max is allowed: a constant charge (0 switches prolation off).
        if (!(q_min >= 0.0 && q_min <= q_max)) throw std::invalid_argument("charge requires 0 <= q_min <= q_max");
        if (alpha < 1) throw std::invalid_argument("charge.alpha must be >= 1");
        if (iteration_steps < 1) throw std::invalid_argument("charge.iteration_steps must be >= 1");
    }
};

/// Overflow-free logistic of 10 (g - 1/2).
[[nodiscard]] inline double sigmoidSmooth(double g) {
    if (!(g > 0.0 && g <= 1.0)) throw std::domain_error("informed ratio must lie in (0,1]");
    const double z = 10.0 * (g - 0.5);
    if (g < 0.5) {
        const double e = std::exp(z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(-z));
}

[[nodiscard]] inline double decayFactor(double sigma, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    return std::log(tau * sigma + 1.0) / std::log(tau + 1.0);
}

[[nodiscard]] inline double informedRatio(double zeta_current, double zeta_initial) {
    if (!(zeta_initial > 0.0)) throw std::domain_error("initial informed measure must be positive");
    if (zeta_current > zeta_initial) throw std::domain_error("informed measure grew");
    return zeta_current / zeta_initial;
}

/// floor(m_min + theta (m_max - m_min)) clamped to [m_min, m_max].
[[nodiscard]] inline long long batchSizeFromDecay(double theta, const BatchConfig& config) {
    const double raw = std::floor(static_cast<double>(config.m_min) +
                                  theta * static_cast<double>(config.m_max - config.m_min));
    return std::clamp(static_cast<long long>(raw), config.m_min, config.m_max);
}

/// Recomputes the batch size after a solution change. Returns the previous
/// batch size unchanged when the cost did not change. `c_min` is the
/// start-goal distance.
[[nodiscard]] inline long long adaptBatchSize(double c_current, double c_min, const BatchConfig& config,
                                              BatchState& state) {
    if (std::isfinite(state.c_last) && c_current == state.c_last) return state.batch_size;
    if (std::isinf(c_current)) return state.batch_size;
    if (c_current < c_min) throw std::domain_error("solution cost below the straight-line lower bound");
    if (c_current > state.c_last) throw std::domain_error("solution cost increased");

    const int n = config.n_dim;
    state.c_last = c_current;
    if (!state.zeta_initial) {
        state.zeta_initial = lebesgueMeasure(c_current, c_min, n);
        ++state.zeta_initial_writes;
    }
    state.zeta_current = lebesgueMeasure(c_current, c_min, n);

    // A straight-line first solution has zero measure; the ratio is then 1. A
    // later straight-line solution takes the g -> 0+ limit.
    double g = *state.zeta_initial > 0.0 ? informedRatio(state.zeta_current, *state.zeta_initial) : 1.0;
    g = std::max(g, std::numeric_limits<double>::min());
    const double sigma = sigmoidSmooth(g);
    const double theta = decayFactor(sigma, config.tau());
    state.batch_size = batchSizeFromDecay(theta, config);
    return state.batch_size;
}

/// Partial sum of the tanh Maclaurin series for the charge:
///   q = (q_min + q_max)/2 + sum_{i=1}^{alpha} 2^(2i-1) B_2i (2^(2i)-1) x^(2i-1) (q_min - q_max) / (2i)!
/// x is clamped to [-1.4, 1.4] (inside the radius of convergence pi/2) and the
/// result to [q_min, q_max].
[[nodiscard]] inline double tanhTaylorCharge(double x_biased, double q_min, double q_max, int alpha) {
    if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
    const double x = std::clamp(x_biased, -1.4, 1.4);
    const auto coeffs = TanhSeries::instance().coefficients(static_cast<std::size_t>(alpha));
    // Horner in x^2 over the odd powers, highest order first.
    const double x2 = x * x;
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x2 + *it;
    const double tanh_x = acc * x;
    const double q = 0.5 * (q_min + q_max) + 0.5 * (q_min - q_max) * tanh_x;
    return std::clamp(q, q_min, q_max);
}

[[nodiscard]] inline double tanhClosedCharge(double x_biased, double q_min, double q_max) {
    return 0.5 * (q_min + q_max) + 0.5 * (q_min - q_max) * std::tanh(x_biased);
}

/// Batch-size normalization onto [0,1] and the epsilon/beta bias.
[[nodiscard]] inline double normalizeBatch(long long batch, const BatchConfig& config) {
    return static_cast<double>(batch - config.m_min) / static_cast<double>(config.m_max - config.m_min);
}

[[nodiscard]] inline double biasedBatch(long long batch, const ChargeConfig& charge, const BatchConfig& config) {
    return charge.epsilon * (normalizeBatch(batch, config) + charge.beta);
}

/// Monotone stand-ins for the non-tanh schedules, in terms of the normalized
/// batch u = x / epsilon - beta: q(0) = q_max, q(1) = q_min.
[[nodiscard]] inline double alternateChargeSchedule(double x_biased, const ChargeConfig& config) {
    const double u = std::clamp(x_biased / config.epsilon - config.beta, 0.0, 1.0);
    const double span = config.q_max - config.q_min;
    switch (config.schedule) {
        case ChargeSchedule::Exponential: return config.q_min + span * std::exp(-5.0 * u);
        case ChargeSchedule::Polynomial: return config.q_min + span * std::pow(1.0 - u, 3);
        case ChargeSchedule::Logarithmic: return config.q_max - span * std::log1p(9.0 * u) / std::log(10.0);
        case ChargeSchedule::Iteration: {
            const double steps = config.iteration_steps;
            return config.q_max - span * std::floor(u * steps) / steps;
        }
        default: break;
    }
    throw std::invalid_argument("not an alternate charge schedule: " + std::string(toString(config.schedule)));
}

/// Charge shared by every vertex of a batch of size `batch_adapt`. Batches
/// outside [m_min, m_max] are clamped.
[[nodiscard]] inline double vertexCharge(long long batch_adapt, const ChargeConfig& charge, const BatchConfig& batch) {
    const long long b = std::clamp(batch_adapt, batch.m_min, batch.m_max);
    const double x = biasedBatch(b, charge, batch);
    double q = 0.0;
    switch (charge.schedule) {
        case ChargeSchedule::TanhClosed: q = tanhClosedCharge(x, charge.q_min, charge.q_max); break;
        case ChargeSchedule::TanhTaylor: q = tanhTaylorCharge(x, charge.q_min, charge.q_max, charge.alpha); break;
        default: q = alternateChargeSchedule(x, charge); break;
    }
    return std::clamp(q, charge.q_min, charge.q_max);
}

}  // namespace aptstar
