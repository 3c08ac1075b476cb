// Plans across a 2D dividing wall with both batch planners and prints the
// anytime cost log of each.

#include <iostream>

#include "aptstar/aptstar.hpp"

int main() {
    using namespace aptstar;
    WorldSpec spec;
    spec.family = WorldFamily::DividingWall;
    spec.dimension = 2;
    spec.gap_count = 2;
    spec.gap_width = 0.05;
    const ProblemInstance problem = canonicalProblem(makeWorld(spec));

    PlannerConfig config;
    config.max_time = 0.5;
    config.rng_seed = 7;
    for (const char* id : {"apt", "bit"}) {
        const PlannerRun run = runPlanner(id, problem, config);
        std::cout << id << ':';
        for (const auto& e : run.events) std::cout << "  " << e.cost << " @ " << e.time << 's';
        std::cout << '\n';
    }
}
