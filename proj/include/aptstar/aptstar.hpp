#pragma once

#include "aptstar/adaptive.hpp"
#include "aptstar/bench/results.hpp"
#include "aptstar/bench/runner.hpp"
#include "aptstar/bench/summary.hpp"
#include "aptstar/bernoulli.hpp"
#include "aptstar/geometry.hpp"
#include "aptstar/io.hpp"
#include "aptstar/kdtree.hpp"
#include "aptstar/neighbors.hpp"
#include "aptstar/planner/batch_planner.hpp"
#include "aptstar/planner/informed_rrt_star.hpp"
#include "aptstar/planner/planners.hpp"
#include "aptstar/planner/problem.hpp"
#include "aptstar/planner/rrt_connect.hpp"
#include "aptstar/worlds.hpp"
