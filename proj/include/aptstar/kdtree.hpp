#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "aptstar/geometry.hpp"

namespace aptstar {

/// Static k-d tree for Euclidean radius queries. Points are copied into a flat
/// buffer at build time; queries return the caller-supplied ids.
class KdTree {
public:
    KdTree() = default;

    template <class IdRange, class PointOf>
    KdTree(int dimension, const IdRange& ids, PointOf&& point_of) : dim_(dimension) {
        for (std::size_t id : ids) {
            const State& p = point_of(id);
            ids_.push_back(id);
            coords_.insert(coords_.end(), p.data(), p.data() + dim_);
        }
        order_.resize(ids_.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        nodes_.reserve(2 * ids_.size() / kLeafSize + 2);
        if (!order_.empty()) build(0, order_.size());
    }

    [[nodiscard]] std::size_t size() const noexcept { return ids_.size(); }
    [[nodiscard]] bool empty() const noexcept { return ids_.empty(); }

    /// Appends the ids of all points with |p - query| <= radius to `out`.
    void radiusSearch(const State& query, double radius, std::vector<std::size_t>& out) const {
        if (nodes_.empty()) return;
        search(0, query, radius, radius * radius, out);
    }

    [[nodiscard]] std::vector<std::size_t> radiusSearch(const State& query, double radius) const {
        std::vector<std::size_t> out;
        radiusSearch(query, radius, out);
        return out;
    }

private:
    static constexpr std::size_t kLeafSize = 8;

    struct Node {
        std::size_t begin = 0;
        std::size_t end = 0;
        int axis = -1;  // -1 marks a leaf
        double split = 0.0;
        std::size_t left = 0;
        std::size_t right = 0;
    };

    [[nodiscard]] double coord(std::size_t point, int axis) const {
        return coords_[point * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(axis)];
    }

    std::size_t build(std::size_t begin, std::size_t end) {
        const std::size_t index = nodes_.size();
        nodes_.push_back(Node{begin, end});
        if (end - begin <= kLeafSize) return index;

        int best_axis = 0;
        double best_spread = -1.0;
        for (int a = 0; a < dim_; ++a) {
            double lo = coord(order_[begin], a);
            double hi = lo;
            for (std::size_t i = begin + 1; i < end; ++i) {
                const double v = coord(order_[i], a);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                best_axis = a;
            }
        }
        if (best_spread <= 0.0) return index;

        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                         order_.begin() + static_cast<std::ptrdiff_t>(mid),
                         order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                             return coord(a, best_axis) < coord(b, best_axis);
                         });
        const double split = coord(order_[mid], best_axis);
        const std::size_t left = build(begin, mid);
        const std::size_t right = build(mid, end);
        nodes_[index].axis = best_axis;
        nodes_[index].split = split;
        nodes_[index].left = left;
        nodes_[index].right = right;
        return index;
    }

    void search(std::size_t node_index, const State& q, double radius, double radius_sq,
                std::vector<std::size_t>& out) const {
        const Node& node = nodes_[node_index];
        if (node.axis < 0) {
            for (std::size_t i = node.begin; i < node.end; ++i) {
                const std::size_t p = order_[i];
                double d2 = 0.0;
                for (int a = 0; a < dim_; ++a) {
                    const double diff = coord(p, a) - q[a];
                    d2 += diff * diff;
                }
                if (d2 <= radius_sq) out.push_back(ids_[p]);
            }
            return;
        }
        const double diff = q[node.axis] - node.split;
        // Left holds coords <= split, right holds coords >= split.
        if (diff - radius <= 0.0) search(node.left, q, radius, radius_sq, out);
        if (diff + radius >= 0.0) search(node.right, q, radius, radius_sq, out);
    }

    int dim_ = 0;
    std::vector<std::size_t> ids_;
    std::vector<double> coords_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace aptstar
