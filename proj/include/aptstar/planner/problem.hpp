#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aptstar/adaptive.hpp"
#include "aptstar/geometry.hpp"
#include "aptstar/neighbors.hpp"

namespace aptstar {

/// Shortest-path query: reach any goal from start, minimizing path length.
struct ProblemInstance {
    World world;
    State start;
    std::vector<State> goals;

    [[nodiscard]] int dimension() const noexcept { return world.dimension(); }

    /// Straight-line lower bound to the nearest goal.
    [[nodiscard]] double minCost() const {
        double best = kInfinity;
        for (const auto& g : goals) best = std::min(best, distance(start, g));
        return best;
    }

    /// Admissible cost-to-go.
    [[nodiscard]] double heuristic(const State& x) const {
        double best = kInfinity;
        for (const auto& g : goals) best = std::min(best, (x - g).norm());
        return best;
    }

    void validate() const {
        if (goals.empty()) throw std::invalid_argument("problem has no goal");
        requireSameDimension(start, world.bounds().lo());
        if (!isStateValid(world, start)) throw std::invalid_argument("start state is in collision or out of bounds");
        for (const auto& g : goals) {
            requireSameDimension(start, g);
            if (!isStateValid(world, g)) throw std::invalid_argument("goal state is in collision or out of bounds");
        }
        if (!(minCost() > 0.0)) throw std::invalid_argument("start coincides with a goal");
    }
};

/// Canonical start (0.05, 0.5, ..., 0.5) and goal (0.95, 0.5, ..., 0.5).
inline ProblemInstance canonicalProblem(World world) {
    const int n = world.dimension();
    State start = State::Constant(n, 0.5);
    State goal = State::Constant(n, 0.5);
    start[0] = 0.05;
    goal[0] = 0.95;
    return {std::move(world), std::move(start), {std::move(goal)}};
}

struct PlannerConfig {
    double max_time = 1.0;  // seconds; +inf for no wall-clock limit
    long long max_iterations = std::numeric_limits<long long>::max();
    double goal_bias = 0.05;
    double eta = 1.001;
    double rewire_factor = 1.2;
    double motion_resolution = 0.0;  // 0: 1e-3 of the bounds diagonal
    double max_edge_length = 0.0;    // 0: per-dimension default (RRT family only)
    long long default_batch = BatchConfig::kDefaultBatch;
    NeighborConfig neighbor;
    BatchConfig batch;
    ChargeConfig charge;
    bool adaptive_batch = true;
    bool prolate_neighbors = true;
    std::uint64_t rng_seed = 0;

    [[nodiscard]] bool timeLimited() const { return std::isfinite(max_time); }
    [[nodiscard]] bool iterationLimited() const { return max_iterations != std::numeric_limits<long long>::max(); }

    void validate() const {
        if (!timeLimited() && !iterationLimited()) throw std::invalid_argument("planner needs a time or iteration budget");
        if (!(max_time > 0.0)) throw std::invalid_argument("max_time must be positive");
        if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
        if (!(goal_bias >= 0.0 && goal_bias < 1.0)) throw std::invalid_argument("goal_bias must be in [0,1)");
        if (!(eta >= 1.0)) throw std::invalid_argument("eta must be >= 1");
        if (!(rewire_factor > 0.0)) throw std::invalid_argument("rewire_factor must be positive");
        if (motion_resolution < 0.0) throw std::invalid_argument("motion_resolution must be non-negative");
        if (default_batch < 1) throw std::invalid_argument("default batch size must be >= 1");
        neighbor.validate();
        batch.validate();
        charge.validate();
    }

    /// Maximum RRT edge length: 0.5 / 1.25 / 3.0 in R^4 / R^8 / R^16,
    /// otherwise a fifth of the bounds diagonal.
    [[nodiscard]] double edgeLength(const World& world) const {
        if (max_edge_length > 0.0) return max_edge_length;
        switch (world.dimension()) {
            case 4: return 0.5;
            case 8: return 1.25;
            case 16: return 3.0;
            default: return 0.2 * world.bounds().diagonal();
        }
    }

    [[nodiscard]] double resolution(const World& world) const {
        return motion_resolution > 0.0 ? motion_resolution : world.defaultResolution();
    }
};

struct SolutionEvent {
    double time = 0.0;
    long long iteration = 0;
    double cost = kInfinity;

    friend bool operator==(const SolutionEvent&, const SolutionEvent&) = default;
};

struct TimeCost {
    double time = kInfinity;
    double cost = kInfinity;
};

struct RunCounters {
    long long iterations = 0;
    long long batches = 0;
    long long samples = 0;
    long long collision_checks = 0;
    long long neighbor_queries = 0;
    long long shrink_rounds = 0;

    friend bool operator==(const RunCounters&, const RunCounters&) = default;
};

struct PlannerRun {
    std::string planner;
    std::vector<SolutionEvent> events;
    std::optional<TimeCost> initial;
    std::optional<TimeCost> final;
    bool success = false;
    std::optional<std::vector<State>> path;
    RunCounters counters;
    double elapsed = 0.0;
};

[[nodiscard]] inline double pathCost(const std::vector<State>& path) {
    double c = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) c += distance(path[i - 1], path[i]);
    return c;
}

namespace detail {

/// Wall-clock + iteration budget shared by all planners.
class Budget {
public:
    explicit Budget(const PlannerConfig& config)
        : max_time_(config.max_time), max_iterations_(config.max_iterations), start_(Clock::now()) {}

    [[nodiscard]] double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

    [[nodiscard]] bool exhausted(long long iterations) const {
        return iterations >= max_iterations_ || elapsed() >= max_time_;
    }

private:
    using Clock = std::chrono::steady_clock;
    double max_time_;
    long long max_iterations_;
    Clock::time_point start_;
};

/// Appends an improvement event and keeps initial/final in sync.
inline void recordSolution(PlannerRun& run, double time, long long iteration, double cost) {
    if (!run.events.empty() && !(cost < run.events.back().cost)) return;
    run.events.push_back({time, iteration, cost});
    if (!run.initial) run.initial = TimeCost{time, cost};
    run.final = TimeCost{time, cost};
    run.success = true;
}

}  // namespace detail

}  // namespace aptstar
