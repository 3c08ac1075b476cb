#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

#include "aptstar/planner/batch_planner.hpp"
#include "aptstar/planner/informed_rrt_star.hpp"
#include "aptstar/planner/problem.hpp"
#include "aptstar/planner/rrt_connect.hpp"

namespace aptstar {

inline constexpr std::array<std::string_view, 4> kPlannerIds = {"apt", "bit", "rrt_connect", "informed_rrt_star"};

[[nodiscard]] inline bool isPlannerId(std::string_view id) {
    for (auto known : kPlannerIds) {
        if (known == id) return true;
    }
    return false;
}

[[nodiscard]] inline PlannerRun runPlanner(std::string_view id, const ProblemInstance& problem,
                                           const PlannerConfig& config) {
    if (id == "apt") return planApt(problem, config);
    if (id == "bit") return planBatchInformedTrees(problem, config);
    if (id == "rrt_connect") return planRrtConnect(problem, config);
    if (id == "informed_rrt_star") return planInformedRrtStar(problem, config);
    throw std::invalid_argument("unknown planner id: " + std::string(id));
}

}  // namespace aptstar
