#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "aptstar/bench/results.hpp"
#include "aptstar/io.hpp"
#include "aptstar/planner/planners.hpp"
#include "aptstar/worlds.hpp"

namespace aptstar {

struct SuiteWorld {
    WorldSpec spec;
    std::optional<double> max_time;  // overrides the suite budget
};

struct SuitePlanner {
    std::string id;  // planner id, see kPlannerIds
    std::string label;  // record name; defaults to id
    PlannerConfig config;
};

struct BenchmarkSuite {
    std::string id = "suite";
    std::vector<SuiteWorld> worlds;
    std::vector<SuitePlanner> planners;
    std::size_t trials = 100;
    double max_time = 1.0;
    long long max_iterations = std::numeric_limits<long long>::max();
    std::uint64_t seed_base = 0;
};

/// {"id", "trials", "max_time", "max_iterations", "seed_base",
///  "worlds": [world spec + optional "max_time"] | {"family", "dimension", "seeds": [a, b]},
///  "planners": [{"id", "label"?, "config"?}]}
[[nodiscard]] inline BenchmarkSuite suiteFromJson(const Json& j) {
    BenchmarkSuite s;
    try {
        s.id = j.value("id", s.id);
        s.trials = j.value("trials", s.trials);
        if (j.contains("max_time")) s.max_time = nullToInfinity(j.at("max_time"));
        s.max_iterations = j.value("max_iterations", s.max_iterations);
        s.seed_base = j.value("seed_base", s.seed_base);
        for (const auto& w : j.at("worlds")) {
            std::optional<double> budget;
            if (w.contains("max_time")) budget = w.at("max_time").get<double>();
            Json spec = w;
            spec.erase("max_time");
            if (spec.contains("seeds")) {
                // Seed range [first, last] expands to one world per seed.
                const auto range = spec.at("seeds").get<std::array<std::uint64_t, 2>>();
                spec.erase("seeds");
                for (std::uint64_t seed = range[0]; seed <= range[1]; ++seed) {
                    spec["seed"] = seed;
                    s.worlds.push_back({worldSpecFromJson(spec), budget});
                }
            } else {
                s.worlds.push_back({worldSpecFromJson(spec), budget});
            }
        }
        for (const auto& p : j.at("planners")) {
            SuitePlanner planner;
            planner.id = p.at("id").get<std::string>();
            if (!isPlannerId(planner.id)) throw ConfigError("unknown planner id: " + planner.id);
            planner.label = p.value("label", planner.id);
            if (p.contains("config")) planner.config = plannerConfigFromJson(p.at("config"));
            s.planners.push_back(std::move(planner));
        }
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad suite file: ") + e.what());
    }
    if (s.worlds.empty() || s.planners.empty() || s.trials == 0) {
        throw ConfigError("suite needs at least one world, one planner and one trial");
    }
    return s;
}

/// Runs every (planner, world, trial) cell; trial t uses seed seed_base + t
/// for every planner. Records stream to `out` as they complete. A run that
/// throws is recorded as a failure with its error message.
inline void runBenchmark(const BenchmarkSuite& suite, const std::filesystem::path& out, int jobs = 1,
                         const std::function<void(const RunRecord&)>& on_record = {}) {
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    std::vector<ProblemInstance> problems;
    for (const auto& w : suite.worlds) problems.push_back(canonicalProblem(makeWorld(w.spec)));

    struct Task {
        std::size_t planner;
        std::size_t world;
        std::uint64_t trial;
    };
    std::vector<Task> tasks;
    for (std::size_t w = 0; w < suite.worlds.size(); ++w) {
        for (std::uint64_t t = 0; t < suite.trials; ++t) {
            for (std::size_t p = 0; p < suite.planners.size(); ++p) tasks.push_back({p, w, t});
        }
    }

    ResultsWriter writer(out, resultsHeader(suite.id, jobs));
    std::atomic<std::size_t> next{0};
    std::mutex callback_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task& task = tasks[i];
            const SuitePlanner& planner = suite.planners[task.planner];
            const SuiteWorld& world = suite.worlds[task.world];
            PlannerConfig config = planner.config;
            config.rng_seed = suite.seed_base + task.trial;
            config.max_time = world.max_time.value_or(suite.max_time);
            config.max_iterations = suite.max_iterations;
            RunRecord record;
            try {
                PlannerRun run = runPlanner(planner.id, problems[task.world], config);
                run.planner = planner.label;
                record = makeRecord(suite.id, world.spec.id(), config.rng_seed, config, run);
            } catch (const std::exception& e) {
                record.suite = suite.id;
                record.planner = planner.label;
                record.world = world.spec.id();
                record.seed = config.rng_seed;
                record.max_time = config.max_time;
                record.max_iterations = config.max_iterations;
                record.error = e.what();
            }
            writer.append(record);
            if (on_record) {
                std::lock_guard lock(callback_mutex);
                on_record(record);
            }
        }
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < jobs; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

}  // namespace aptstar
