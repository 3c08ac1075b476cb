#pragma once

// Batch-informed forward search with force-prolated neighbourhoods.
//
// Each batch adds B informed samples (free and in-collision alike; the
// in-collision ones only act as repulsive charges), then runs a lazy
// best-first search over the implicit graph: a vertex queue ordered by
// g + h and an edge queue ordered by g + c + h, where candidate edges come
// from the elliptical neighbour query. Edges are collision-checked only when
// popped. Improvements are logged; the next batch prunes everything the new
// informed set excludes. With adaptive_batch and prolate_neighbors disabled
// this is a fixed-batch isotropic-ball planner on the same skeleton.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <queue>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "aptstar/adaptive.hpp"
#include "aptstar/geometry.hpp"
#include "aptstar/kdtree.hpp"
#include "aptstar/neighbors.hpp"
#include "aptstar/planner/informed_sampler.hpp"
#include "aptstar/planner/problem.hpp"
#include "aptstar/planner/search_tree.hpp"

namespace aptstar {

class BatchInformedPlanner;

/// Optional hooks for inspecting a run between batches.
struct BatchObserver {
    std::function<void(const BatchInformedPlanner&)> after_batch;
    std::function<void(std::span<const State> pruned, double cost)> after_prune;
};

class BatchInformedPlanner {
public:
    BatchInformedPlanner(const ProblemInstance& problem, PlannerConfig config, std::string name = "apt")
        : problem_(problem), config_(std::move(config)), name_(std::move(name)), sampler_(problem_) {}

    void setObserver(BatchObserver observer) { observer_ = std::move(observer); }
    /// Per-round dump of every neighbour query (round N_total N_invalid phi |F| d1/r).
    void setTrace(std::ostream* trace) { trace_ = trace; }

    PlannerRun solve() {
        problem_.validate();
        config_.validate();
        n_ = problem_.dimension();
        c_min_ = problem_.minCost();
        resolution_ = config_.resolution(problem_.world);
        batch_config_ = config_.batch;
        batch_config_.n_dim = n_;
        rng_.seed(config_.rng_seed);

        PlannerRun run;
        run.planner = name_;
        detail::Budget budget(config_);

        tree_.addRoot(problem_.start);
        addPoolEntry(problem_.start, true);
        for (const auto& goal : problem_.goals) goals_.push_back(addNode(goal, true));

        while (!budget.exhausted(counters_.iterations) && !optimal()) {
            startBatch();
            search(run, budget);
            if (observer_.after_batch) observer_.after_batch(*this);
        }

        run.counters = counters_;
        run.elapsed = budget.elapsed();
        if (best_goal_ != SearchTree::kNone) run.path = extractPath(tree_, best_goal_);
        return run;
    }

    [[nodiscard]] const SearchTree& tree() const noexcept { return tree_; }
    [[nodiscard]] std::span<const ChargedSample> pool() const noexcept { return pool_; }
    [[nodiscard]] bool alive(int i) const { return alive_.at(static_cast<std::size_t>(i)) != 0; }
    [[nodiscard]] double bestCost() const noexcept { return best_; }
    [[nodiscard]] long long batchSize() const noexcept { return batch_; }
    [[nodiscard]] double charge() const noexcept { return charge_; }
    [[nodiscard]] double radius() const noexcept { return radius_; }

private:
    struct VertexEntry {
        double key;
        std::uint64_t seq;
        int v;
        bool operator>(const VertexEntry& o) const { return key != o.key ? key > o.key : seq > o.seq; }
    };
    struct EdgeEntry {
        double key;
        std::uint64_t seq;
        int from;
        int to;
        bool operator>(const EdgeEntry& o) const { return key != o.key ? key > o.key : seq > o.seq; }
    };
    template <class T>
    using MinQueue = std::priority_queue<T, std::vector<T>, std::greater<T>>;

    // Tree node i and pool entry i describe the same state.
    int addNode(const State& x, bool valid) {
        tree_.addNode(x);
        return addPoolEntry(x, valid);
    }

    int addPoolEntry(const State& x, bool valid) {
        pool_.push_back({x, valid, 0.0});
        alive_.push_back(1);
        heuristic_.push_back(problem_.heuristic(x));
        return static_cast<int>(pool_.size()) - 1;
    }

    [[nodiscard]] bool optimal() const { return best_ <= c_min_ * (1.0 + 1e-12); }
    [[nodiscard]] double h(int i) const { return heuristic_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] const State& at(int i) const { return pool_[static_cast<std::size_t>(i)].state; }
    [[nodiscard]] bool isGoal(int i) const { return i >= 1 && i <= static_cast<int>(goals_.size()); }

    static std::uint64_t edgeKey(int a, int b) {
        const auto lo = static_cast<std::uint64_t>(std::min(a, b));
        const auto hi = static_cast<std::uint64_t>(std::max(a, b));
        return (lo << 32) | hi;
    }

    void startBatch() {
        ++counters_.batches;
        ++counters_.iterations;
        if (best_ < pruned_at_) prune();

        if (config_.adaptive_batch && std::isfinite(best_)) {
            batch_ = adaptBatchSize(std::max(best_, c_min_), c_min_, batch_config_, batch_state_);
        } else {
            batch_ = config_.default_batch;
        }
        charge_ = config_.prolate_neighbors ? vertexCharge(batch_, config_.charge, batch_config_) : 0.0;

        for (long long i = 0; i < batch_; ++i) {
            State x = sampler_.sample(best_, rng_);
            const bool valid = isStateValid(problem_.world, x);
            addNode(x, valid);
        }
        counters_.samples += batch_;

        std::vector<std::size_t> live;
        live.reserve(pool_.size());
        for (std::size_t i = 0; i < pool_.size(); ++i) {
            if (alive_[i]) live.push_back(i);
        }
        index_ = KdTree(n_, live, [&](std::size_t i) -> const State& { return pool_[i].state; });

        const double measure = std::isfinite(best_) ? lebesgueMeasure(std::max(best_, c_min_), c_min_, n_) : kInfinity;
        radius_ = config_.rewire_factor *
                  rnnRadius(batch_, n_, measure, problem_.world.bounds().volume(), config_.eta);

        vertices_ = {};
        edges_ = {};
        expanded_.assign(pool_.size(), 0);
        for (std::size_t i : live) {
            const int v = static_cast<int>(i);
            if (tree_.inTree(v) && tree_.g(v) + h(v) < best_) vertices_.push({tree_.g(v) + h(v), seq_++, v});
        }
    }

    void search(PlannerRun& run, const detail::Budget& budget) {
        while (!budget.exhausted(counters_.iterations)) {
            const bool have_vertex = !vertices_.empty();
            const bool have_edge = !edges_.empty();
            if (!have_vertex && !have_edge) return;
            ++counters_.iterations;
            if (have_vertex && (!have_edge || vertices_.top().key <= edges_.top().key)) {
                const int v = vertices_.top().v;
                vertices_.pop();
                expand(v);
            } else {
                const EdgeEntry e = edges_.top();
                edges_.pop();
                processEdge(e, run, budget);
                if (optimal()) return;
            }
        }
    }

    void expand(int v) {
        const auto vi = static_cast<std::size_t>(v);
        if (!alive_[vi] || !tree_.inTree(v) || expanded_[vi]) return;
        if (tree_.g(v) + h(v) >= best_) return;
        expanded_[vi] = 1;

        const State& x = at(v);
        candidates_.clear();
        index_.radiusSearch(x, config_.neighbor.max_prolongation * radius_, candidates_);
        std::erase(candidates_, vi);
        const double q = charge_;
        const NeighborQuery query = ellipticalNearestNeighbors(
            x, std::span<const ChargedSample>(pool_), candidates_, radius_, config_.neighbor,
            [q](const ChargedSample&) { return q; }, trace_);
        ++counters_.neighbor_queries;
        counters_.shrink_rounds += query.rounds;

        for (std::size_t w : query.neighbors) considerEdge(v, static_cast<int>(w));
        // Goal connections are attempted from every expanded vertex; the edge
        // queue order makes the direct ones cheap to reject.
        for (int goal : goals_) considerEdge(v, goal);
    }

    void considerEdge(int v, int w) {
        if (w == v || w == tree_.root() || !alive_[static_cast<std::size_t>(w)]) return;
        if (w == tree_.parent(v)) return;
        const double c = distance(at(v), at(w));
        const double gv = tree_.g(v);
        if (gv + c + h(w) >= best_) return;
        if (gv + c >= tree_.g(w)) return;
        if (failed_edges_.contains(edgeKey(v, w))) return;
        edges_.push({gv + c + h(w), seq_++, v, w});
    }

    void processEdge(const EdgeEntry& e, PlannerRun& run, const detail::Budget& budget) {
        if (e.key >= best_) {
            // Every remaining entry is at least as expensive.
            vertices_ = {};
            edges_ = {};
            return;
        }
        const int v = e.from;
        const int w = e.to;
        if (!tree_.inTree(v)) return;
        const double c = distance(at(v), at(w));
        const double gv = tree_.g(v);
        if (gv + c + h(w) >= best_ || gv + c >= tree_.g(w)) return;
        if (failed_edges_.contains(edgeKey(v, w))) return;

        ++counters_.collision_checks;
        if (!isMotionValid(problem_.world, at(v), at(w), resolution_)) {
            failed_edges_.insert(edgeKey(v, w));
            return;
        }
        tree_.setParent(w, v);
        expanded_[static_cast<std::size_t>(w)] = 0;
        vertices_.push({tree_.g(w) + h(w), seq_++, w});
        updateBest(run, budget);
    }

    void updateBest(PlannerRun& run, const detail::Budget& budget) {
        for (int goal : goals_) {
            if (tree_.inTree(goal) && tree_.g(goal) < best_) {
                best_ = tree_.g(goal);
                best_goal_ = goal;
            }
        }
        if (best_goal_ != SearchTree::kNone) detail::recordSolution(run, budget.elapsed(), counters_.iterations, best_);
    }

    void prune() {
        pruned_at_ = best_;
        const double slack = best_ * (1.0 + 1e-9);
        std::vector<State> pruned;
        const auto count = static_cast<int>(pool_.size());
        for (int i = 1; i < count; ++i) {
            if (!alive_[static_cast<std::size_t>(i)] || !tree_.inTree(i)) continue;
            const double f_hat = distance(problem_.start, at(i)) + h(i);
            if (f_hat > best_ || tree_.g(i) + h(i) > slack) tree_.detachSubtree(i);
        }
        for (int i = 1; i < count; ++i) {
            if (!alive_[static_cast<std::size_t>(i)] || isGoal(i)) continue;
            const double f_hat = distance(problem_.start, at(i)) + h(i);
            if (f_hat > best_) {
                alive_[static_cast<std::size_t>(i)] = 0;
                if (observer_.after_prune) pruned.push_back(at(i));
            }
        }
        if (observer_.after_prune) observer_.after_prune(pruned, best_);
    }

    const ProblemInstance& problem_;
    PlannerConfig config_;
    std::string name_;
    InformedSampler sampler_;
    BatchObserver observer_;
    std::ostream* trace_ = nullptr;

    int n_ = 0;
    double c_min_ = 0.0;
    double resolution_ = 0.0;
    BatchConfig batch_config_;
    BatchState batch_state_;
    Rng rng_;

    SearchTree tree_;
    std::vector<ChargedSample> pool_;
    std::vector<char> alive_;
    std::vector<double> heuristic_;
    std::vector<int> goals_;
    KdTree index_;
    std::unordered_set<std::uint64_t> failed_edges_;

    MinQueue<VertexEntry> vertices_;
    MinQueue<EdgeEntry> edges_;
    std::vector<char> expanded_;
    std::vector<std::size_t> candidates_;
    std::uint64_t seq_ = 0;

    double best_ = kInfinity;
    double pruned_at_ = kInfinity;
    int best_goal_ = SearchTree::kNone;
    long long batch_ = 0;
    double charge_ = 0.0;
    double radius_ = 0.0;
    RunCounters counters_;
};

/// Adaptive batch size with charge-prolated neighbourhoods.
[[nodiscard]] inline PlannerRun planApt(const ProblemInstance& problem, const PlannerConfig& config) {
    return BatchInformedPlanner(problem, config, "apt").solve();
}

/// Fixed batch of `default_batch` samples and isotropic ball neighbourhoods.
[[nodiscard]] inline PlannerRun planBatchInformedTrees(const ProblemInstance& problem, PlannerConfig config) {
    config.adaptive_batch = false;
    config.prolate_neighbors = false;
    return BatchInformedPlanner(problem, config, "bit").solve();
}

}  // namespace aptstar
