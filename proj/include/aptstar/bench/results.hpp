#pragma once

// Results file: JSON Lines. The first line is a header object
// {"format": "aptstar-results", "version": 1, ...}; every following line is
// one run record. Infinite times and costs are written as null.

#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "aptstar/io.hpp"
#include "aptstar/planner/problem.hpp"

namespace aptstar {

inline constexpr const char* kResultsFormat = "aptstar-results";
inline constexpr int kResultsVersion = 1;

struct RunRecord {
    std::string suite;
    std::string planner;
    std::string world;
    std::uint64_t seed = 0;
    bool success = false;
    double t_init = kInfinity;
    double c_init = kInfinity;
    double t_final = kInfinity;
    double c_final = kInfinity;
    RunCounters counters;
    std::vector<SolutionEvent> events;
    double max_time = kInfinity;
    long long max_iterations = 0;
    std::string error;  // non-empty when the run threw

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

[[nodiscard]] inline RunRecord makeRecord(const std::string& suite, const std::string& world, std::uint64_t seed,
                                          const PlannerConfig& config, const PlannerRun& run) {
    RunRecord r;
    r.suite = suite;
    r.planner = run.planner;
    r.world = world;
    r.seed = seed;
    r.success = run.success;
    if (run.initial) {
        r.t_init = run.initial->time;
        r.c_init = run.initial->cost;
    }
    if (run.final) {
        r.t_final = run.final->time;
        r.c_final = run.final->cost;
    }
    r.counters = run.counters;
    r.events = run.events;
    r.max_time = config.max_time;
    r.max_iterations = config.max_iterations;
    return r;
}

[[nodiscard]] inline Json toJson(const RunCounters& c) {
    return {{"iterations", c.iterations},           {"batches", c.batches},
            {"samples", c.samples},                 {"collision_checks", c.collision_checks},
            {"neighbor_queries", c.neighbor_queries}, {"shrink_rounds", c.shrink_rounds}};
}

[[nodiscard]] inline Json toJson(const RunRecord& r) {
    Json events = Json::array();
    for (const auto& e : r.events) events.push_back({e.time, e.iteration, e.cost});
    Json j = {{"suite", r.suite},
              {"planner", r.planner},
              {"world", r.world},
              {"seed", r.seed},
              {"success", r.success},
              {"t_init", finiteOrNull(r.t_init)},
              {"c_init", finiteOrNull(r.c_init)},
              {"t_final", finiteOrNull(r.t_final)},
              {"c_final", finiteOrNull(r.c_final)},
              {"counters", toJson(r.counters)},
              {"events", events},
              {"max_time", finiteOrNull(r.max_time)},
              {"max_iterations", r.max_iterations}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

[[nodiscard]] inline RunRecord recordFromJson(const Json& j) {
    RunRecord r;
    r.suite = j.value("suite", "");
    r.planner = j.at("planner").get<std::string>();
    r.world = j.at("world").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.success = j.at("success").get<bool>();
    r.t_init = nullToInfinity(j.at("t_init"));
    r.c_init = nullToInfinity(j.at("c_init"));
    r.t_final = nullToInfinity(j.at("t_final"));
    r.c_final = nullToInfinity(j.at("c_final"));
    if (j.contains("counters")) {
        const Json& c = j.at("counters");
        r.counters.iterations = c.value("iterations", 0LL);
        r.counters.batches = c.value("batches", 0LL);
        r.counters.samples = c.value("samples", 0LL);
        r.counters.collision_checks = c.value("collision_checks", 0LL);
        r.counters.neighbor_queries = c.value("neighbor_queries", 0LL);
        r.counters.shrink_rounds = c.value("shrink_rounds", 0LL);
    }
    for (const auto& e : j.value("events", Json::array())) {
        r.events.push_back({e.at(0).get<double>(), e.at(1).get<long long>(), e.at(2).get<double>()});
    }
    r.max_time = j.contains("max_time") ? nullToInfinity(j.at("max_time")) : kInfinity;
    r.max_iterations = j.value("max_iterations", 0LL);
    r.error = j.value("error", "");
    return r;
}

[[nodiscard]] inline Json resultsHeader(const std::string& suite, int jobs) {
    return {{"format", kResultsFormat}, {"version", kResultsVersion}, {"suite", suite}, {"jobs", jobs}};
}

/// Append-only writer shared by concurrent trials. Every record is flushed as
/// soon as it is written, so a crash loses at most the runs in flight.
class ResultsWriter {
public:
    ResultsWriter(const std::filesystem::path& path, const Json& header) : out_(path, std::ios::trunc) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        out_ << header.dump() << '\n' << std::flush;
    }

    void append(const RunRecord& record) {
        const std::string line = toJson(record).dump();
        std::lock_guard lock(mutex_);
        out_ << line << '\n' << std::flush;
    }

private:
    std::mutex mutex_;
    std::ofstream out_;
};

[[nodiscard]] inline std::vector<RunRecord> readResults(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::vector<RunRecord> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const Json j = Json::parse(line);
        if (first) {
            first = false;
            if (j.value("format", "") != kResultsFormat) throw std::runtime_error(path.string() + ": not a results file");
            continue;
        }
        out.push_back(recordFromJson(j));
    }
    return out;
}

/// Every *.jsonl results file in `dir`, in file-name order.
[[nodiscard]] inline std::vector<RunRecord> readResultsDir(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<RunRecord> out;
    for (const auto& f : files) {
        auto part = readResults(f);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

}  // namespace aptstar
