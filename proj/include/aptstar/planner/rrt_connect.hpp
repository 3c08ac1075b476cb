#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "aptstar/geometry.hpp"
#include "aptstar/planner/problem.hpp"

namespace aptstar {

namespace detail {

/// Plain RRT tree: states plus parent links, possibly several roots.
struct RrtTree {
    std::vector<State> states;
    std::vector<int> parent;

    int add(State x, int p) {
        states.push_back(std::move(x));
        parent.push_back(p);
        return static_cast<int>(states.size()) - 1;
    }

    [[nodiscard]] int nearest(const State& x) const {
        int best = 0;
        double best_d = kInfinity;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const double d = (states[i] - x).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        return best;
    }

    /// Node-to-root state sequence.
    [[nodiscard]] std::vector<State> branch(int i) const {
        std::vector<State> out;
        for (; i >= 0; i = parent[static_cast<std::size_t>(i)]) out.push_back(states[static_cast<std::size_t>(i)]);
        return out;
    }
};

/// Point at most `range` from `from` towards `to`.
[[nodiscard]] inline State steer(const State& from, const State& to, double range) {
    const double d = distance(from, to);
    if (d <= range) return to;
    return from + (to - from) * (range / d);
}

}  // namespace detail

/// Bidirectional RRT with extend/connect. Feasibility only: the first path
/// found is the answer and the run stops there.
[[nodiscard]] inline PlannerRun planRrtConnect(const ProblemInstance& problem, const PlannerConfig& config) {
    problem.validate();
    config.validate();
    enum class Step { Trapped, Advanced, Reached };

    PlannerRun run;
    run.planner = "rrt_connect";
    detail::Budget budget(config);
    Rng rng(config.rng_seed);
    const double range = config.edgeLength(problem.world);
    const double resolution = config.resolution(problem.world);
    RunCounters& counters = run.counters;

    detail::RrtTree start_tree;
    detail::RrtTree goal_tree;
    start_tree.add(problem.start, -1);
    for (const auto& g : problem.goals) goal_tree.add(g, -1);

    auto extend = [&](detail::RrtTree& tree, const State& target, int& added) {
        const int near = tree.nearest(target);
        const State& from = tree.states[static_cast<std::size_t>(near)];
        State x = detail::steer(from, target, range);
        if (distance(from, x) == 0.0) {
            added = near;
            return Step::Reached;
        }
        ++counters.collision_checks;
        if (!isMotionValid(problem.world, from, x, resolution)) return Step::Trapped;
        const bool reached = x == target;
        added = tree.add(std::move(x), near);
        return reached ? Step::Reached : Step::Advanced;
    };

    detail::RrtTree* a = &start_tree;
    detail::RrtTree* b = &goal_tree;
    while (!budget.exhausted(counters.iterations)) {
        ++counters.iterations;
        ++counters.samples;
        const State target = sampleUniform(problem.world.bounds(), rng);
        if (!isStateValid(problem.world, target)) continue;

        int a_new = -1;
        if (extend(*a, target, a_new) != Step::Trapped) {
            const State& bridge = a->states[static_cast<std::size_t>(a_new)];
            int b_new = -1;
            Step step = Step::Advanced;
            while (step == Step::Advanced) step = extend(*b, bridge, b_new);
            if (step == Step::Reached) {
                std::vector<State> from_a = a->branch(a_new);
                std::vector<State> from_b = b->branch(b_new);
                if (a != &start_tree) std::swap(from_a, from_b);
                // from_a runs bridge -> start, from_b runs bridge -> goal.
                std::vector<State> path(from_a.rbegin(), from_a.rend());
                path.insert(path.end(), from_b.begin() + 1, from_b.end());
                detail::recordSolution(run, budget.elapsed(), counters.iterations, pathCost(path));
                run.path = std::move(path);
                break;
            }
        }
        std::swap(a, b);
    }
    run.elapsed = budget.elapsed();
    return run;
}

}  // namespace aptstar
