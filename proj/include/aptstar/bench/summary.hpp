#pragma once

// Per-cell order statistics and cost-vs-time traces. A failed run counts as
// +inf time and cost.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include "aptstar/bench/results.hpp"

namespace aptstar {

struct OrderStats {
    double min = kInfinity;
    double med = kInfinity;
    double max = kInfinity;
};

/// min / lower-middle median / max.
[[nodiscard]] inline OrderStats orderStats(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("order statistics of an empty sample");
    std::sort(values.begin(), values.end());
    return {values.front(), values[(values.size() - 1) / 2], values.back()};
}

struct SummaryRow {
    std::string planner;
    std::string world;
    std::size_t trials = 0;
    std::size_t successes = 0;
    OrderStats t_init;
    OrderStats c_init;
    OrderStats c_final;

    [[nodiscard]] double successRate() const {
        return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
    }
};

/// World id without its trailing "-s<seed>", e.g. "dw-r4-s3" -> "dw-r4".
[[nodiscard]] inline std::string worldFamilyKey(const std::string& world) {
    const auto pos = world.rfind("-s");
    if (pos == std::string::npos || pos + 2 >= world.size()) return world;
    if (!std::all_of(world.begin() + static_cast<std::ptrdiff_t>(pos) + 2, world.end(),
                     [](char c) { return c >= '0' && c <= '9'; })) {
        return world;
    }
    return world.substr(0, pos);
}

using WorldKey = std::function<std::string(const std::string&)>;

/// One row per (planner, key(world)) cell, sorted by planner then world key.
[[nodiscard]] inline std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records,
                                                       const WorldKey& key = {}) {
    if (records.empty()) throw std::invalid_argument("no records to summarize");
    std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> cells;
    for (const auto& r : records) cells[{r.planner, key ? key(r.world) : r.world}].push_back(&r);

    std::vector<SummaryRow> rows;
    for (const auto& [id, runs] : cells) {
        SummaryRow row;
        row.planner = id.first;
        row.world = id.second;
        row.trials = runs.size();
        std::vector<double> t_init;
        std::vector<double> c_init;
        std::vector<double> c_final;
        for (const RunRecord* r : runs) {
            row.successes += r->success ? 1 : 0;
            t_init.push_back(r->success ? r->t_init : kInfinity);
            c_init.push_back(r->success ? r->c_init : kInfinity);
            c_final.push_back(r->success ? r->c_final : kInfinity);
        }
        row.t_init = orderStats(std::move(t_init));
        row.c_init = orderStats(std::move(c_init));
        row.c_final = orderStats(std::move(c_final));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Success rate with two decimals, e.g. "0.67".
[[nodiscard]] inline std::string formatRate(double rate) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << rate;
    return s.str();
}

inline void writeSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "planner,world,trials,success,t_init_min,t_init_med,t_init_max,c_init_min,c_init_med,c_init_max,"
           "c_final_min,c_final_med,c_final_max\n";
    auto v = [](double x) { return std::isfinite(x) ? std::to_string(x) : std::string("inf"); };
    for (const auto& r : rows) {
        out << r.planner << ',' << r.world << ',' << r.trials << ',' << formatRate(r.successRate()) << ',' << v(r.t_init.min)
            << ',' << v(r.t_init.med) << ',' << v(r.t_init.max) << ',' << v(r.c_init.min) << ','
            << v(r.c_init.med) << ',' << v(r.c_init.max) << ',' << v(r.c_final.min) << ',' << v(r.c_final.med)
            << ',' << v(r.c_final.max) << '\n';
    }
}

/// Cost of the best solution known at time t (piecewise constant, +inf
/// before the first event).
[[nodiscard]] inline double costAt(const std::vector<SolutionEvent>& events, double t) {
    double c = kInfinity;
    for (const auto& e : events) {
        if (e.time > t) break;
        c = e.cost;
    }
    return c;
}

/// Zero-based ranks (lo, hi) of the order statistics bracketing the median
/// with at least `level` coverage, from the Binomial(N, 1/2) distribution.
/// For N = 100 at 99% these are 36 and 63 (ranks 37 and 64 counted from one).
[[nodiscard]] inline std::pair<std::size_t, std::size_t> medianConfidenceRanks(std::size_t n, double level = 0.99) {
    if (n == 0) throw std::invalid_argument("confidence interval of an empty sample");
    const double alpha = 0.5 * (1.0 - level);
    boost::math::binomial_distribution<double> bin(static_cast<double>(n), 0.5);
    // Largest j (1-based) with P(X <= j - 1) <= alpha.
    std::size_t j = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (boost::math::cdf(bin, static_cast<double>(k - 1)) <= alpha) j = k;
        else break;
    }
    if (j == 0) return {0, n - 1};  // too few runs for the requested coverage
    return {j - 1, n - j};
}

/// Log-spaced grid of `points` times in [t_min, t_max].
[[nodiscard]] inline std::vector<double> logGrid(double t_min, double t_max, std::size_t points) {
    if (!(t_min > 0.0 && t_max > t_min) || points < 2) throw std::invalid_argument("invalid log grid");
    std::vector<double> grid(points);
    const double a = std::log(t_min);
    const double b = std::log(t_max);
    for (std::size_t i = 0; i < points; ++i) grid[i] = std::exp(a + (b - a) * static_cast<double>(i) / (points - 1));
    return grid;
}

struct CostTrace {
    std::string planner;
    std::string world;
    std::vector<double> times;
    std::vector<double> median;
    std::vector<double> ci_lo;
    std::vector<double> ci_hi;
    std::vector<double> percentiles;               // requested p values
    std::vector<std::vector<double>> percentile_values;  // [p][time]
};

/// Pointwise cross-run statistics per (planner, key(world)) cell. The
/// p-percentile is the order statistic at index floor(p (N - 1)).
[[nodiscard]] inline std::vector<CostTrace> costTraces(const std::vector<RunRecord>& records,
                                                       const std::vector<double>& times,
                                                       const std::vector<double>& percentiles = {},
                                                       const WorldKey& key = {}, double level = 0.99) {
    std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> cells;
    for (const auto& r : records) cells[{r.planner, key ? key(r.world) : r.world}].push_back(&r);

    std::vector<CostTrace> out;
    for (const auto& [id, runs] : cells) {
        CostTrace trace{id.first, id.second, times, {}, {}, {}, percentiles, {}};
        trace.percentile_values.assign(percentiles.size(), {});
        const std::size_t n = runs.size();
        const auto [lo, hi] = medianConfidenceRanks(n, level);
        std::vector<double> costs(n);
        for (double t : times) {
            for (std::size_t i = 0; i < n; ++i) costs[i] = costAt(runs[i]->events, t);
            std::sort(costs.begin(), costs.end());
            trace.median.push_back(costs[(n - 1) / 2]);
            trace.ci_lo.push_back(costs[lo]);
            trace.ci_hi.push_back(costs[hi]);
            for (std::size_t p = 0; p < percentiles.size(); ++p) {
                const auto idx = static_cast<std::size_t>(std::floor(percentiles[p] * static_cast<double>(n - 1)));
                trace.percentile_values[p].push_back(costs[std::min(idx, n - 1)]);
            }
        }
        out.push_back(std::move(trace));
    }
    return out;
}

inline void writeTracesCsv(std::ostream& out, const std::vector<CostTrace>& traces) {
    out << "planner,world,time,median,ci_lo,ci_hi";
    if (!traces.empty()) {
        for (double p : traces.front().percentiles) out << ",p" << p;
    }
    out << '\n';
    auto v = [](double x) { return std::isfinite(x) ? std::to_string(x) : std::string("inf"); };
    for (const auto& t : traces) {
        for (std::size_t i = 0; i < t.times.size(); ++i) {
            out << t.planner << ',' << t.world << ',' << t.times[i] << ',' << v(t.median[i]) << ',' << v(t.ci_lo[i])
                << ',' << v(t.ci_hi[i]);
            for (const auto& pv : t.percentile_values) out << ',' << v(pv[i]);
            out << '\n';
        }
    }
}

}  // namespace aptstar
