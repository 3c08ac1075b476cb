#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "aptstar/geometry.hpp"

namespace aptstar {

/// Index-based rooted tree over a growing node array. Nodes outside the tree
/// have no parent and infinite cost-to-come. Edge cost is Euclidean length.
class SearchTree {
public:
    static constexpr int kNone = -1;

    struct Node {
        State state;
        int parent = kNone;
        double g = kInfinity;
        std::vector<int> children;
        bool in_tree = false;
    };

    SearchTree() = default;

    int addNode(State state) {
        nodes_.push_back(Node{std::move(state)});
        return static_cast<int>(nodes_.size()) - 1;
    }

    int addRoot(State state) {
        if (root_ != kNone) throw std::logic_error("tree already has a root");
        root_ = addNode(std::move(state));
        nodes_[static_cast<std::size_t>(root_)].g = 0.0;
        nodes_[static_cast<std::size_t>(root_)].in_tree = true;
        return root_;
    }

    [[nodiscard]] int root() const noexcept { return root_; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] const Node& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
    [[nodiscard]] const State& state(int i) const { return node(i).state; }
    [[nodiscard]] double g(int i) const { return node(i).g; }
    [[nodiscard]] bool inTree(int i) const { return node(i).in_tree; }
    [[nodiscard]] int parent(int i) const { return node(i).parent; }

    /// Attaches `child` (currently outside the tree, or in it under another
    /// parent) below `parent`, and propagates the cost change to descendants.
    void setParent(int child, int parent) {
        if (child == root_) throw std::logic_error("cannot re-parent the root");
        if (!inTree(parent)) throw std::logic_error("parent is not in the tree");
        Node& c = at(child);
        if (c.parent != kNone) {
            auto& siblings = at(c.parent).children;
            siblings.erase(std::find(siblings.begin(), siblings.end(), child));
        }
        c.parent = parent;
        c.in_tree = true;
        at(parent).children.push_back(child);
        c.g = at(parent).g + distance(at(parent).state, c.state);
        propagate(child);
    }

    /// Removes `i` and all its descendants from the tree; returns them.
    std::vector<int> detachSubtree(int i) {
        if (i == root_) throw std::logic_error("cannot detach the root");
        std::vector<int> removed;
        Node& n = at(i);
        if (!n.in_tree) return removed;
        if (n.parent != kNone) {
            auto& siblings = at(n.parent).children;
            siblings.erase(std::find(siblings.begin(), siblings.end(), i));
        }
        std::vector<int> stack{i};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            Node& vn = at(v);
            for (int c : vn.children) stack.push_back(c);
            vn.children.clear();
            vn.parent = kNone;
            vn.g = kInfinity;
            vn.in_tree = false;
            removed.push_back(v);
        }
        return removed;
    }

private:
    Node& at(int i) { return nodes_.at(static_cast<std::size_t>(i)); }

    void propagate(int from) {
        std::vector<int> stack(at(from).children.begin(), at(from).children.end());
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            Node& vn = at(v);
            vn.g = at(vn.parent).g + distance(at(vn.parent).state, vn.state);
            stack.insert(stack.end(), vn.children.begin(), vn.children.end());
        }
    }

    std::vector<Node> nodes_;
    int root_ = kNone;
};

/// Root-to-node state sequence.
[[nodiscard]] inline std::vector<State> extractPath(const SearchTree& tree, int goal_node) {
    if (!tree.inTree(goal_node)) throw std::invalid_argument("goal node is not connected to the tree");
    std::vector<State> path;
    for (int v = goal_node; v != SearchTree::kNone; v = tree.parent(v)) path.push_back(tree.state(v));
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace aptstar
