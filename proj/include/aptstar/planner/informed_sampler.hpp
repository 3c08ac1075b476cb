#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "aptstar/geometry.hpp"
#include "aptstar/planner/problem.hpp"

namespace aptstar {

/// Samples the union of the per-goal informed sets of a problem. With one goal
/// this is plain direct informed sampling; with several, a goal is picked in
/// proportion to its set's measure and the draw is thinned by the number of
/// sets covering it, which keeps the union uniform.
class InformedSampler {
public:
    explicit InformedSampler(const ProblemInstance& problem) : problem_(&problem) {}

    [[nodiscard]] State sample(double best_cost, Rng& rng) const {
        const Box& bounds = problem_->world.bounds();
        if (!std::isfinite(best_cost)) return sampleUniform(bounds, rng);
        const auto& goals = problem_->goals;
        if (goals.size() == 1) return sampleInformed(InformedSet(problem_->start, goals[0], best_cost), bounds, rng);

        std::vector<double> weights(goals.size(), 0.0);
        for (std::size_t j = 0; j < goals.size(); ++j) {
            const double c_min = distance(problem_->start, goals[j]);
            if (c_min < best_cost) weights[j] = lebesgueMeasure(best_cost, c_min, problem_->dimension());
        }
        std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        while (true) {
            const std::size_t j = pick(rng);
            State x = sampleInformed(InformedSet(problem_->start, goals[j], best_cost), bounds, rng);
            int covering = 0;
            for (const auto& g : goals) covering += (distance(x, problem_->start) + distance(x, g) < best_cost);
            if (unit(rng) * covering < 1.0) return x;
        }
    }

private:
    const ProblemInstance* problem_;
};

}  // namespace aptstar
