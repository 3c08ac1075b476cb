#pragma once

// Generators for the two synthetic benchmark families inside the unit
// hypercube: a dividing wall pierced by gaps, and random axis-aligned boxes.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aptstar/geometry.hpp"
#include "aptstar/planner/problem.hpp"

namespace aptstar {

enum class WorldFamily { Empty, DividingWall, RandomRectangles };

[[nodiscard]] inline std::string_view toString(WorldFamily f) {
    switch (f) {
        case WorldFamily::Empty: return "empty";
        case WorldFamily::DividingWall: return "dw";
        case WorldFamily::RandomRectangles: return "rr";
    }
    return "unknown";
}

[[nodiscard]] inline WorldFamily parseWorldFamily(std::string_view name) {
    if (name == "empty") return WorldFamily::Empty;
    if (name == "dw" || name == "dividing_wall") return WorldFamily::DividingWall;
    if (name == "rr" || name == "random_rectangles") return WorldFamily::RandomRectangles;
    throw std::invalid_argument("unknown world family: " + std::string(name));
}

struct WorldSpec {
    WorldFamily family = WorldFamily::Empty;
    int dimension = 2;
    std::uint64_t seed = 0;

    // dividing wall
    int gap_count = 2;
    std::optional<double> gap_width;  // unset: each gap drawn from gap_width_range
    std::array<double, 2> gap_width_range = {0.02, 0.18};
    double wall_thickness = 0.1;

    // random rectangles
    int obstacle_count = 16;
    std::array<double, 2> width_range = {0.1, 0.45};

    /// Short identifier such as "dw-r4-s3".
    [[nodiscard]] std::string id() const {
        return std::string(toString(family)) + "-r" + std::to_string(dimension) + "-s" + std::to_string(seed);
    }
};

/// Coarse feasibility screen: BFS over a 64 x 64 grid of cell centres in the
/// first two axes (other coordinates at the middle of the bounds), with
/// motion-checked moves between 4-adjacent cells and from start/goal to the
/// cells around them. A true result is a real collision-checked path.
[[nodiscard]] inline bool feasibleOnGrid(const ProblemInstance& problem, int cells = 64) {
    const World& world = problem.world;
    const Box& b = world.bounds();
    const double res = world.defaultResolution();
    State mid = 0.5 * (b.lo() + b.hi());
    auto center = [&](int i, int j) {
        State x = mid;
        x[0] = b.lo()[0] + (i + 0.5) / cells * (b.hi()[0] - b.lo()[0]);
        x[1] = b.lo()[1] + (j + 0.5) / cells * (b.hi()[1] - b.lo()[1]);
        return x;
    };
    auto cellOf = [&](const State& x, int axis) {
        const double t = (x[axis] - b.lo()[axis]) / (b.hi()[axis] - b.lo()[axis]);
        return std::clamp(static_cast<int>(t * cells), 0, cells - 1);
    };
    // Neighbouring cells of x reachable by a straight valid motion.
    auto attach = [&](const State& x) {
        std::vector<int> out;
        const int ci = cellOf(x, 0);
        const int cj = cellOf(x, 1);
        for (int i = std::max(0, ci - 1); i <= std::min(cells - 1, ci + 1); ++i) {
            for (int j = std::max(0, cj - 1); j <= std::min(cells - 1, cj + 1); ++j) {
                if (isMotionValid(world, x, center(i, j), res)) out.push_back(i * cells + j);
            }
        }
        return out;
    };

    if (isMotionValid(world, problem.start, problem.goals.front(), res)) return true;
    std::vector<char> target(static_cast<std::size_t>(cells * cells), 0);
    for (const auto& g : problem.goals) {
        for (int c : attach(g)) target[static_cast<std::size_t>(c)] = 1;
    }
    std::vector<char> seen(target.size(), 0);
    std::queue<int> open;
    for (int c : attach(problem.start)) {
        seen[static_cast<std::size_t>(c)] = 1;
        open.push(c);
    }
    constexpr std::array<std::pair<int, int>, 4> moves = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    while (!open.empty()) {
        const int c = open.front();
        open.pop();
        if (target[static_cast<std::size_t>(c)]) return true;
        const int i = c / cells;
        const int j = c % cells;
        for (auto [di, dj] : moves) {
            const int ni = i + di;
            const int nj = j + dj;
            if (ni < 0 || nj < 0 || ni >= cells || nj >= cells) continue;
            const int nc = ni * cells + nj;
            if (seen[static_cast<std::size_t>(nc)]) continue;
            if (!isMotionValid(world, center(i, j), center(ni, nj), res)) continue;
            seen[static_cast<std::size_t>(nc)] = 1;
            open.push(nc);
        }
    }
    return false;
}

namespace detail {

inline Box extrudedBox(int n, double x0, double x1, double y0, double y1) {
    State lo = State::Zero(n);
    State hi = State::Ones(n);
    lo[0] = x0;
    hi[0] = x1;
    lo[1] = y0;
    hi[1] = y1;
    return {lo, hi};
}

inline Rng subSeeded(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return Rng(seq);
}

}  // namespace detail

/// Wall occupying x_1 in [0.5 - t/2, 0.5 + t/2], with gaps centred at
/// (i + 1) / (gap_count + 1) along x_2, extruded over every other axis.
[[nodiscard]] inline World makeDividingWall(const WorldSpec& spec) {
    const int n = spec.dimension;
    if (n < 2) throw std::invalid_argument("dividing wall needs dimension >= 2");
    if (spec.gap_count < 1) throw std::invalid_argument("dividing wall needs gap_count >= 1");
    if (!(spec.wall_thickness > 0.0 && spec.wall_thickness < 0.9)) {
        throw std::invalid_argument("wall thickness must be in (0, 0.9)");
    }
    const auto [w_lo, w_hi] = spec.gap_width_range;
    if (!spec.gap_width && !(w_lo > 0.0 && w_lo <= w_hi)) throw std::invalid_argument("invalid gap width range");
    if (spec.gap_width && !(*spec.gap_width > 0.0)) throw std::invalid_argument("gap width must be positive");

    Rng rng = detail::subSeeded(spec.seed, 0);
    std::uniform_real_distribution<double> width(w_lo, w_hi);
    std::vector<std::pair<double, double>> gaps;
    for (int i = 0; i < spec.gap_count; ++i) {
        const double c = static_cast<double>(i + 1) / (spec.gap_count + 1);
        const double w = spec.gap_width ? *spec.gap_width : width(rng);
        gaps.emplace_back(c - 0.5 * w, c + 0.5 * w);
    }
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (gaps[i].first < 0.0 || gaps[i].second > 1.0) throw std::invalid_argument("gap exceeds the unit extent");
        if (i > 0 && gaps[i].first <= gaps[i - 1].second) throw std::invalid_argument("gaps overlap");
    }

    const double x0 = 0.5 - 0.5 * spec.wall_thickness;
    const double x1 = 0.5 + 0.5 * spec.wall_thickness;
    std::vector<Box> pieces;
    double y = 0.0;
    for (const auto& [g0, g1] : gaps) {
        if (g0 > y) pieces.push_back(detail::extrudedBox(n, x0, x1, y, g0));
        y = g1;
    }
    if (y < 1.0) pieces.push_back(detail::extrudedBox(n, x0, x1, y, 1.0));
    if (pieces.empty()) throw std::invalid_argument("gaps cover the whole wall");
    return World(Box::unitCube(n), std::move(pieces));
}

/// `obstacle_count` boxes with per-axis widths uniform in width_range and
/// centres uniform in the unit cube, clipped to it. Boxes covering the start
/// or goal are redrawn; infeasible layouts are regenerated from the next
/// sub-seed, up to 100 times.
[[nodiscard]] inline World makeRandomRectangles(const WorldSpec& spec) {
    const int n = spec.dimension;
    if (n < 2) throw std::invalid_argument("random rectangles need dimension >= 2");
    if (spec.obstacle_count < 0) throw std::invalid_argument("obstacle_count must be >= 0");
    const auto [w_lo, w_hi] = spec.width_range;
    if (!(w_lo > 0.0 && w_lo <= w_hi && w_hi < 0.5)) throw std::invalid_argument("width_range must lie in (0, 0.5)");

    const ProblemInstance probe = canonicalProblem(World(Box::unitCube(n)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> width(w_lo, w_hi);
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        Rng rng = detail::subSeeded(spec.seed, attempt);
        std::vector<Box> boxes;
        while (static_cast<int>(boxes.size()) < spec.obstacle_count) {
            State lo(n);
            State hi(n);
            for (int i = 0; i < n; ++i) {
                const double c = unit(rng);
                const double w = width(rng);
                lo[i] = std::max(0.0, c - 0.5 * w);
                hi[i] = std::min(1.0, c + 0.5 * w);
            }
            Box box(lo, hi);
            if (box.contains(probe.start) || box.contains(probe.goals.front())) continue;
            boxes.push_back(std::move(box));
        }
        World world(Box::unitCube(n), std::move(boxes));
        if (feasibleOnGrid(canonicalProblem(world))) return world;
    }
    throw std::runtime_error("no feasible random-rectangle layout within 100 attempts");
}

[[nodiscard]] inline World makeWorld(const WorldSpec& spec) {
    switch (spec.family) {
        case WorldFamily::Empty:
            if (spec.dimension < 1) throw std::invalid_argument("dimension must be >= 1");
            return World(Box::unitCube(spec.dimension));
        case WorldFamily::DividingWall: return makeDividingWall(spec);
        case WorldFamily::RandomRectangles: return makeRandomRectangles(spec);
    }
    throw std::invalid_argument("unknown world family");
}

}  // namespace aptstar
