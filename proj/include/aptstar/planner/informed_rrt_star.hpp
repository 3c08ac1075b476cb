#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "aptstar/geometry.hpp"
#include "aptstar/neighbors.hpp"
#include "aptstar/planner/informed_sampler.hpp"
#include "aptstar/planner/problem.hpp"
#include "aptstar/planner/rrt_connect.hpp"
#include "aptstar/planner/search_tree.hpp"

namespace aptstar {

/// RRT* with isotropic RGG-radius rewiring, goal-biased sampling and, once a
/// solution exists, direct informed sampling.
[[nodiscard]] inline PlannerRun planInformedRrtStar(const ProblemInstance& problem, const PlannerConfig& config) {
    problem.validate();
    config.validate();

    PlannerRun run;
    run.planner = "informed_rrt_star";
    detail::Budget budget(config);
    Rng rng(config.rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_goal(0, problem.goals.size() - 1);
    const InformedSampler sampler(problem);
    const int n = problem.dimension();
    const double range = config.edgeLength(problem.world);
    const double resolution = config.resolution(problem.world);
    const double c_min = problem.minCost();
    const double bounds_volume = problem.world.bounds().volume();
    RunCounters& counters = run.counters;

    SearchTree tree;
    tree.addRoot(problem.start);
    std::vector<int> goal_node(problem.goals.size(), SearchTree::kNone);
    double best = kInfinity;
    int best_goal = SearchTree::kNone;

    std::vector<int> near;
    while (!budget.exhausted(counters.iterations)) {
        ++counters.iterations;
        ++counters.samples;

        std::size_t goal_index = problem.goals.size();
        State target;
        if (unit(rng) < config.goal_bias) goal_index = pick_goal(rng);
        if (goal_index < problem.goals.size() && goal_node[goal_index] == SearchTree::kNone) {
            target = problem.goals[goal_index];
        } else {
            goal_index = problem.goals.size();
            target = sampler.sample(best, rng);
        }

        int nearest = 0;
        double nearest_d = kInfinity;
        for (int i = 0; i < static_cast<int>(tree.size()); ++i) {
            const double d = distance(tree.state(i), target);
            if (d < nearest_d) {
                nearest_d = d;
                nearest = i;
            }
        }
        const State x = detail::steer(tree.state(nearest), target, range);
        if (distance(tree.state(nearest), x) == 0.0 || !isStateValid(problem.world, x)) continue;
        ++counters.collision_checks;
        if (!isMotionValid(problem.world, tree.state(nearest), x, resolution)) continue;

        const double measure = std::isfinite(best) ? lebesgueMeasure(std::max(best, c_min), c_min, n) : kInfinity;
        const double radius = std::min(
            range, config.rewire_factor *
                       rnnRadius(static_cast<long long>(tree.size()) + 1, n, measure, bounds_volume, config.eta));
        near.clear();
        for (int i = 0; i < static_cast<int>(tree.size()); ++i) {
            if (i != nearest && distance(tree.state(i), x) <= radius) near.push_back(i);
        }
        ++counters.neighbor_queries;

        int parent = nearest;
        double g_new = tree.g(nearest) + distance(tree.state(nearest), x);
        for (int v : near) {
            const double g = tree.g(v) + distance(tree.state(v), x);
            if (g >= g_new) continue;
            ++counters.collision_checks;
            if (isMotionValid(problem.world, tree.state(v), x, resolution)) {
                parent = v;
                g_new = g;
            }
        }
        const int id = tree.addNode(x);
        tree.setParent(id, parent);
        if (goal_index < problem.goals.size() && x == problem.goals[goal_index]) goal_node[goal_index] = id;

        for (int w : near) {
            if (w == parent || w == tree.root()) continue;
            if (tree.g(id) + distance(x, tree.state(w)) >= tree.g(w)) continue;
            ++counters.collision_checks;
            if (isMotionValid(problem.world, x, tree.state(w), resolution)) tree.setParent(w, id);
        }

        for (int g : goal_node) {
            if (g != SearchTree::kNone && tree.g(g) < best) {
                best = tree.g(g);
                best_goal = g;
            }
        }
        if (best_goal != SearchTree::kNone) detail::recordSolution(run, budget.elapsed(), counters.iterations, best);
    }
    if (best_goal != SearchTree::kNone) run.path = extractPath(tree, best_goal);
    run.elapsed = budget.elapsed();
    return run;
}

}  // namespace aptstar
