#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "aptstar/bench/runner.hpp"
#include "aptstar/bench/summary.hpp"

using namespace aptstar;
namespace fs = std::filesystem;

namespace {

RunRecord record(const std::string& planner, const std::string& world, std::optional<double> cost,
                 double t = 0.5) {
    RunRecord r;
    r.planner = planner;
    r.world = world;
    if (cost) {
        r.success = true;
        r.t_init = t;
        r.c_init = *cost;
        r.t_final = t;
        r.c_final = *cost;
        r.events = {{t, 10, *cost}};
    }
    return r;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("aptstar_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Results lines with every wall-clock field blanked out.
std::vector<std::string> withoutTimes(const fs::path& file) {
    std::ifstream in(file);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        Json j = Json::parse(line);
        if (j.contains("t_init")) {
            j["t_init"] = nullptr;
            j["t_final"] = nullptr;
            for (auto& e : j["events"]) e[0] = nullptr;
        }
        lines.push_back(j.dump());
    }
    return lines;
}

BenchmarkSuite iterationSuite() {
    BenchmarkSuite s;
    s.id = "repeat";
    s.worlds = {{WorldSpec{WorldFamily::DividingWall, 2, 1}, {}}, {WorldSpec{WorldFamily::RandomRectangles, 2, 2}, {}}};
    s.planners = {{"apt", "apt", {}}, {"bit", "bit", {}}, {"rrt_connect", "rrt_connect", {}}};
    s.trials = 3;
    s.max_time = kInfinity;
    s.max_iterations = 4000;
    return s;
}

}  // namespace

TEST(Summarize, MixedSuccessAndFailure) {
    const std::vector<RunRecord> runs = {record("apt", "w", 1.0), record("apt", "w", 2.0), record("apt", "w", {})};
    const auto rows = summarize(runs);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].c_final.min, 1.0);
    EXPECT_EQ(rows[0].c_final.med, 2.0);
    EXPECT_TRUE(std::isinf(rows[0].c_final.max));
    EXPECT_EQ(rows[0].successes, 2u);
    EXPECT_EQ(rows[0].trials, 3u);
    EXPECT_EQ(formatRate(rows[0].successRate()), "0.67");
}

TEST(Summarize, AllFailures) {
    const auto rows = summarize({record("bit", "w", {}), record("bit", "w", {})});
    EXPECT_TRUE(std::isinf(rows[0].t_init.min));
    EXPECT_TRUE(std::isinf(rows[0].c_final.med));
    EXPECT_EQ(formatRate(rows[0].successRate()), "0.00");
    std::ostringstream csv;
    writeSummaryCsv(csv, rows);
    EXPECT_NE(csv.str().find("bit,w,2,0.00,inf,inf,inf"), std::string::npos);
}

TEST(Summarize, SingleRunAndLowerMiddleMedian) {
    const auto one = summarize({record("a", "w", 1.5)});
    EXPECT_EQ(one[0].c_final.min, 1.5);
    EXPECT_EQ(one[0].c_final.med, 1.5);
    EXPECT_EQ(one[0].c_final.max, 1.5);
    const auto two = summarize({record("a", "w", 3.0), record("a", "w", 1.0)});
    EXPECT_EQ(two[0].c_final.med, 1.0);
    EXPECT_THROW((void)summarize({}), std::invalid_argument);
}

TEST(Summarize, InvariantUnderPermutation) {
    std::vector<RunRecord> runs;
    Rng rng(1);
    std::uniform_real_distribution<double> u(1.0, 2.0);
    for (int i = 0; i < 40; ++i) {
        runs.push_back(record(i % 2 ? "apt" : "bit", "dw-r2-s" + std::to_string(i % 3),
                              i % 7 == 0 ? std::nullopt : std::optional<double>(u(rng)), u(rng)));
    }
    std::ostringstream a;
    writeSummaryCsv(a, summarize(runs, worldFamilyKey));
    for (int k = 0; k < 5; ++k) {
        std::shuffle(runs.begin(), runs.end(), rng);
        std::ostringstream b;
        writeSummaryCsv(b, summarize(runs, worldFamilyKey));
        EXPECT_EQ(a.str(), b.str());
    }
    EXPECT_EQ(summarize(runs, worldFamilyKey).size(), 2u);
    EXPECT_EQ(summarize(runs).size(), 6u);
}

TEST(WorldFamilyKey, StripsSeedSuffix) {
    EXPECT_EQ(worldFamilyKey("dw-r4-s12"), "dw-r4");
    EXPECT_EQ(worldFamilyKey("custom"), "custom");
    EXPECT_EQ(worldFamilyKey("rr-r2-sx"), "rr-r2-sx");
}

TEST(CostAt, OneEventTrace) {
    const std::vector<SolutionEvent> events = {{0.1, 5, 2.0}};
    EXPECT_TRUE(std::isinf(costAt(events, 0.05)));
    EXPECT_EQ(costAt(events, 0.1), 2.0);
    EXPECT_EQ(costAt(events, 10.0), 2.0);
    const std::vector<SolutionEvent> more = {{0.1, 5, 2.0}, {0.3, 9, 1.5}};
    EXPECT_EQ(costAt(more, 0.2), 2.0);
    EXPECT_EQ(costAt(more, 0.3), 1.5);
}

TEST(MedianCi, RanksForHundredRuns) {
    const auto [lo, hi] = medianConfidenceRanks(100, 0.99);
    EXPECT_EQ(lo, 36u);
    EXPECT_EQ(hi, 63u);
    // Coverage check against the binomial tail directly.
    const auto [lo5, hi5] = medianConfidenceRanks(5, 0.99);
    EXPECT_EQ(lo5, 0u);
    EXPECT_EQ(hi5, 4u);
    EXPECT_THROW((void)medianConfidenceRanks(0), std::invalid_argument);
}

TEST(CostTraces, BandMatchesOrderStatistics) {
    std::vector<RunRecord> runs;
    std::vector<double> costs;
    Rng rng(8);
    std::uniform_real_distribution<double> u(1.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double c = u(rng);
        costs.push_back(c);
        runs.push_back(record("apt", "w", c, 0.01 + 0.001 * i));
    }
    std::sort(costs.begin(), costs.end());
    const auto traces = costTraces(runs, {0.001, 1.0}, {0.1, 0.9});
    ASSERT_EQ(traces.size(), 1u);
    const CostTrace& t = traces[0];
    EXPECT_TRUE(std::isinf(t.median[0]));
    EXPECT_EQ(t.median[1], costs[49]);
    EXPECT_EQ(t.ci_lo[1], costs[36]);
    EXPECT_EQ(t.ci_hi[1], costs[63]);
    EXPECT_EQ(t.percentile_values[0][1], costs[9]);
    EXPECT_EQ(t.percentile_values[1][1], costs[89]);
}

TEST(LogGrid, EndpointsAndErrors) {
    const auto g = logGrid(0.001, 10.0, 5);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_NEAR(g.front(), 0.001, 1e-15);
    EXPECT_NEAR(g.back(), 10.0, 1e-12);
    EXPECT_NEAR(g[2], 0.1, 1e-12);
    EXPECT_THROW((void)logGrid(0.0, 1.0, 5), std::invalid_argument);
}

TEST(Results, RecordJsonRoundTrip) {
    RunRecord r = record("apt", "dw-r2-s1", 1.25, 0.02);
    r.suite = "s";
    r.seed = 17;
    r.counters.iterations = 400;
    r.max_time = 1.0;
    r.max_iterations = 9;
    EXPECT_EQ(recordFromJson(Json::parse(toJson(r).dump())), r);
    RunRecord fail = record("bit", "w", {});
    fail.error = "boom";
    fail.max_time = kInfinity;
    const Json j = toJson(fail);
    EXPECT_TRUE(j["c_final"].is_null());
    EXPECT_EQ(recordFromJson(j), fail);
}

TEST(RunBenchmark, ThreeTrialsInEmptyWorld) {
    BenchmarkSuite s;
    s.id = "empty";
    s.worlds = {{WorldSpec{WorldFamily::Empty, 2, 0}, {}}};
    s.planners = {{"apt", "apt", {}}};
    s.trials = 3;
    s.max_time = 0.5;
    const fs::path dir = scratch("empty");
    int callbacks = 0;
    runBenchmark(s, dir / "empty.jsonl", 1, [&](const RunRecord&) { ++callbacks; });
    const auto records = readResults(dir / "empty.jsonl");
    ASSERT_EQ(records.size(), 3u);
    EXPECT_EQ(callbacks, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_TRUE(records[i].success);
        EXPECT_NEAR(records[i].c_final, 0.9, 1e-6);
        EXPECT_EQ(records[i].seed, i);
        EXPECT_EQ(records[i].world, "empty-r2-s0");
    }
    std::ifstream in(dir / "empty.jsonl");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(Json::parse(header).at("format"), "aptstar-results");
}

TEST(RunBenchmark, RerunIdenticalUnderIterationBudget) {
    const BenchmarkSuite s = iterationSuite();
    const fs::path dir = scratch("repeat");
    runBenchmark(s, dir / "a.jsonl", 1);
    runBenchmark(s, dir / "b.jsonl", 1);
    const auto a = withoutTimes(dir / "a.jsonl");
    EXPECT_EQ(a.size(), 1u + 2 * 3 * 3);
    EXPECT_EQ(a, withoutTimes(dir / "b.jsonl"));

    // Two workers finish in a different order but produce the same records.
    runBenchmark(s, dir / "c.jsonl", 2);
    auto c = withoutTimes(dir / "c.jsonl");
    auto a_body = std::vector<std::string>(a.begin() + 1, a.end());
    auto c_body = std::vector<std::string>(c.begin() + 1, c.end());
    std::sort(a_body.begin(), a_body.end());
    std::sort(c_body.begin(), c_body.end());
    EXPECT_EQ(a_body, c_body);
}

TEST(RunBenchmark, AblationPairsHaveIdenticalCosts) {
    BenchmarkSuite s;
    s.id = "ablation";
    s.worlds = {{WorldSpec{WorldFamily::RandomRectangles, 2, 3}, {}}};
    PlannerConfig off;
    off.adaptive_batch = false;
    off.charge.q_min = 0.0;
    off.charge.q_max = 0.0;
    s.planners = {{"apt", "apt_off", off}, {"bit", "bit", {}}};
    s.trials = 4;
    s.max_time = kInfinity;
    s.max_iterations = 5000;
    const fs::path dir = scratch("ablation");
    runBenchmark(s, dir / "ablation.jsonl", 1);
    const auto records = readResultsDir(dir);
    ASSERT_EQ(records.size(), 8u);
    for (std::size_t i = 0; i < records.size(); i += 2) {
        EXPECT_EQ(records[i].seed, records[i + 1].seed);
        EXPECT_EQ(records[i].c_final, records[i + 1].c_final);
        EXPECT_EQ(records[i].c_init, records[i + 1].c_init);
        EXPECT_EQ(records[i].counters.iterations, records[i + 1].counters.iterations);
    }
}

TEST(RunBenchmark, ErrorsBecomeFailedRecords) {
    BenchmarkSuite s;
    s.id = "bad";
    // Zero iterations only fails once the planner validates its config.
    s.worlds = {{WorldSpec{WorldFamily::Empty, 2, 0}, {}}};
    s.planners = {{"apt", "apt", {}}};
    s.trials = 1;
    s.max_time = kInfinity;
    s.max_iterations = 0;
    const fs::path dir = scratch("bad");
    runBenchmark(s, dir / "bad.jsonl", 1);
    const auto records = readResults(dir / "bad.jsonl");
    ASSERT_EQ(records.size(), 1u);
    EXPECT_FALSE(records[0].success);
    EXPECT_FALSE(records[0].error.empty());
}

TEST(SuiteJson, SeedRangeExpandsAndUnknownPlannerRejected) {
    const Json j = Json::parse(R"({
        "id": "s", "trials": 2, "max_time": 0.5,
        "worlds": [{"family": "dw", "dimension": 4, "seeds": [0, 9]},
                   {"family": "empty", "dimension": 2, "max_time": 2.0}],
        "planners": [{"id": "apt"}, {"id": "bit", "label": "baseline", "config": {"rewire_factor": 1.5}}]})");
    const BenchmarkSuite s = suiteFromJson(j);
    ASSERT_EQ(s.worlds.size(), 11u);
    EXPECT_EQ(s.worlds[9].spec.id(), "dw-r4-s9");
    EXPECT_EQ(*s.worlds[10].max_time, 2.0);
    EXPECT_EQ(s.planners[1].label, "baseline");
    EXPECT_EQ(s.planners[1].config.rewire_factor, 1.5);
    Json bad = j;
    bad["planners"] = Json::parse(R"([{"id": "prm"}])");
    EXPECT_THROW((void)suiteFromJson(bad), ConfigError);
    bad = j;
    bad["planners"] = Json::array();
    EXPECT_THROW((void)suiteFromJson(bad), ConfigError);
}
