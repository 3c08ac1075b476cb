// aptstar: plan / bench / summarize / worldgen.
// Exit codes: 0 success, 1 failed or infeasible plan, 2 configuration error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aptstar/aptstar.hpp"

namespace fs = std::filesystem;
using namespace aptstar;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kConfigError = 2;

// World file, optionally carrying "start" and "goals"; otherwise the
// canonical start/goal pair is used.
ProblemInstance loadProblem(const std::string& path) {
    const Json j = readJsonFile(path);
    ProblemInstance problem = canonicalProblem(worldFromJson(j));
    try {
        if (j.contains("start")) problem.start = stateFromJson(j.at("start"));
        if (j.contains("goals")) {
            problem.goals.clear();
            for (const auto& g : j.at("goals")) problem.goals.push_back(stateFromJson(g));
        }
        problem.validate();
    } catch (const Json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return problem;
}

std::string fmt(double x) {
    if (!std::isfinite(x)) return "inf";
    std::ostringstream s;
    s << std::setprecision(4) << x;
    return s.str();
}

void printSummary(const std::vector<SummaryRow>& rows) {
    std::cout << std::left << std::setw(20) << "planner" << std::setw(14) << "world" << std::setw(8) << "success"
              << std::setw(34) << "t_init min/med/max" << std::setw(34) << "c_init min/med/max"
              << "c_final min/med/max\n";
    for (const auto& r : rows) {
        auto triple = [](const OrderStats& s) { return fmt(s.min) + " / " + fmt(s.med) + " / " + fmt(s.max); };
        std::cout << std::left << std::setw(20) << r.planner << std::setw(14) << r.world << std::setw(8) << formatRate(r.successRate())
                  << std::setw(34) << triple(r.t_init) + "  " << std::setw(34) << triple(r.c_init) + "  " << triple(r.c_final)
                  << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampling-based optimal motion planning with adaptive batches and prolated neighbourhoods"};
    app.require_subcommand(1);

    // plan
    auto* plan = app.add_subcommand("plan", "Run one planner on one world");
    std::string world_file;
    std::string planner_id = "apt";
    std::string config_file;
    std::uint64_t seed = 0;
    std::optional<double> max_time;
    std::optional<long long> max_iters;
    std::string plan_out;
    bool trace_neighbors = false;
    plan->add_option("--world", world_file, "World JSON file")->required()->check(CLI::ExistingFile);
    plan->add_option("--planner", planner_id, "apt | bit | rrt_connect | informed_rrt_star");
    plan->add_option("--config", config_file, "Planner config JSON (nested or dotted keys)")
        ->check(CLI::ExistingFile);
    plan->add_option("--seed", seed, "Random seed");
    auto* time_opt = plan->add_option("--max-time", max_time, "Wall-clock budget in seconds");
    plan->add_option("--max-iters", max_iters, "Iteration budget")->excludes(time_opt);
    plan->add_option("--out", plan_out, "Results file (JSON Lines, one record)");
    plan->add_flag("--trace-neighbors", trace_neighbors, "Dump every neighbour shrink round to stderr");

    // bench
    auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
    std::string suite_file;
    std::string bench_out;
    int jobs = 1;
    bench->add_option("--suite", suite_file, "Suite JSON file")->required()->check(CLI::ExistingFile);
    bench->add_option("--out", bench_out, "Output directory")->required();
    bench->add_option("--jobs", jobs, "Concurrent trials")->check(CLI::PositiveNumber);

    // summarize
    auto* summarize_cmd = app.add_subcommand("summarize", "Order statistics and cost traces of results");
    std::string summary_in;
    std::string group = "world";
    std::size_t grid_points = 50;
    summarize_cmd->add_option("--in", summary_in, "Directory of *.jsonl results")->required()->check(
        CLI::ExistingDirectory);
    summarize_cmd->add_option("--group", group, "world | family")->check(CLI::IsMember({"world", "family"}));
    summarize_cmd->add_option("--grid-points", grid_points, "Points of the log-spaced trace grid");

    // worldgen
    auto* worldgen = app.add_subcommand("worldgen", "Generate a benchmark world");
    WorldSpec spec;
    std::string family = "dw";
    std::optional<double> gap_width;
    std::string world_out;
    worldgen->add_option("--family", family, "dw | rr | empty")->check(CLI::IsMember({"dw", "rr", "empty"}));
    worldgen->add_option("--dim", spec.dimension, "Dimension")->required();
    worldgen->add_option("--seed", spec.seed, "Generator seed");
    worldgen->add_option("--gap-count", spec.gap_count, "Dividing wall: number of gaps");
    worldgen->add_option("--gap-width", gap_width, "Dividing wall: width of every gap");
    worldgen->add_option("--wall-thickness", spec.wall_thickness, "Dividing wall: thickness");
    worldgen->add_option("--obstacle-count", spec.obstacle_count, "Random rectangles: number of boxes");
    worldgen->add_option("--width-min", spec.width_range[0], "Random rectangles: smallest side");
    worldgen->add_option("--width-max", spec.width_range[1], "Random rectangles: largest side");
    worldgen->add_option("--out", world_out, "Output file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*plan) {
            if (!isPlannerId(planner_id)) throw ConfigError("unknown planner id: " + planner_id);
            const ProblemInstance problem = loadProblem(world_file);
            PlannerConfig config;
            if (!config_file.empty()) config = plannerConfigFromJson(readJsonFile(config_file));
            config.rng_seed = seed;
            if (max_time) config.max_time = *max_time;
            if (max_iters) {
                config.max_iterations = *max_iters;
                config.max_time = kInfinity;
            }
            try {
                config.validate();
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }

            PlannerRun run;
            if (planner_id == "apt" || planner_id == "bit") {
                if (planner_id == "bit") {
                    config.adaptive_batch = false;
                    config.prolate_neighbors = false;
                }
                BatchInformedPlanner planner(problem, config, planner_id);
                if (trace_neighbors) planner.setTrace(&std::cerr);
                run = planner.solve();
            } else {
                run = runPlanner(planner_id, problem, config);
            }

            RunRecord record = makeRecord("plan", fs::path(world_file).stem().string(), seed, config, run);
            Json line = toJson(record);
            if (run.path) {
                Json path = Json::array();
                for (const auto& x : *run.path) path.push_back(toJson(x));
                line["path"] = path;
            }
            if (!plan_out.empty()) {
                std::ofstream out(plan_out);
                if (!out) throw std::runtime_error("cannot write " + plan_out);
                out << resultsHeader("plan", 1).dump() << '\n' << line.dump() << '\n';
            }
            std::cout << run.planner << ": " << (run.success ? "solved" : "no solution");
            if (run.final) std::cout << " cost " << fmt(run.final->cost) << " (first " << fmt(run.initial->cost)
                                     << " at " << fmt(run.initial->time) << " s)";
            std::cout << ", " << run.counters.iterations << " iterations\n";
            return run.success ? kOk : kFailed;
        }

        if (*bench) {
            const BenchmarkSuite suite = suiteFromJson(readJsonFile(suite_file));
            fs::create_directories(bench_out);
            const fs::path out = fs::path(bench_out) / (suite.id + ".jsonl");
            const std::size_t total = suite.worlds.size() * suite.planners.size() * suite.trials;
            std::size_t done = 0;
            std::size_t failed = 0;
            runBenchmark(suite, out, jobs, [&](const RunRecord& r) {
                ++done;
                failed += r.success ? 0 : 1;
                if (done % 50 == 0 || done == total) std::cerr << done << '/' << total << " runs\n";
            });
            std::cout << "wrote " << out.string() << " (" << total << " runs, " << failed << " without solution)\n";
            return kOk;
        }

        if (*summarize_cmd) {
            const auto records = readResultsDir(summary_in);
            const WorldKey key = group == "family" ? WorldKey(worldFamilyKey) : WorldKey{};
            const auto rows = summarize(records, key);
            printSummary(rows);
            std::ofstream summary_csv(fs::path(summary_in) / "summary.csv");
            writeSummaryCsv(summary_csv, rows);

            double t_max = 0.0;
            for (const auto& r : records) {
                t_max = std::max(t_max, std::isfinite(r.max_time) ? r.max_time : r.t_final);
            }
            if (std::isfinite(t_max) && t_max > 0.0) {
                const auto traces = costTraces(records, logGrid(t_max * 1e-4, t_max, grid_points), {}, key);
                std::ofstream traces_csv(fs::path(summary_in) / "traces.csv");
                writeTracesCsv(traces_csv, traces);
            }
            return kOk;
        }

        if (*worldgen) {
            spec.family = parseWorldFamily(family);
            spec.gap_width = gap_width;
            World world;
            try {
                world = makeWorld(spec);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            } catch (const std::runtime_error& e) {
                std::cerr << "worldgen: " << e.what() << '\n';
                return kFailed;
            }
            Json j = toJson(world);
            j["spec"] = toJson(spec);
            if (world_out.empty()) {
                std::cout << j.dump(2) << '\n';
            } else {
                writeJsonFile(world_out, j);
            }
            return kOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailed;
    }
    return kOk;
}
