#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wcoj/constraint.hpp"
#include "wcoj/value.hpp"

namespace wcoj {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

/// The constraint tree. Each node sits at a depth (the length of its
/// pattern) and keeps one sorted pointList holding both its interval
/// endpoints and the labels of its concrete children; the wildcard child is
/// kept apart.
///
/// The tree also owns the frontier: compute_free_tuple() advances it to the
/// smallest tuple >= the current frontier that lies outside every stored
/// box.
class ConstraintTree {
public:
    struct Options {
        /// Stream free values from complete bottom nodes.
        bool complete_nodes = true;
        /// Throw ContractViolation when a principal filter is not a chain.
        bool require_chain = false;
    };

    struct Point {
        Value value;
        bool left = false;   // left end of the interval (value, next point)
        bool right = false;  // right end of the interval (previous point, value)
        NodeId child = kNoNode;
    };

    struct Stats {
        std::uint64_t free_tuples = 0;
        std::uint64_t constraints = 0;
        std::uint64_t cached_intervals = 0;
        std::uint64_t truncations = 0;
        std::uint64_t backtracks = 0;
        std::uint64_t streamed = 0;
        std::uint64_t non_chain_filters = 0;
    };

    explicit ConstraintTree(std::size_t arity);
    ConstraintTree(std::size_t arity, Options options);

    std::size_t arity() const noexcept { return n_; }
    const Options& options() const noexcept { return options_; }
    const Stats& stats() const noexcept { return stats_; }

    /// Inserts the box into the node reached by its pattern, creating the
    /// path as needed. Returns false when nothing changed (the box was
    /// already covered along its path). `source` is recorded as a bit in the
    /// node's source tags when < 64.
    bool insert(const Constraint& c, unsigned source = 64);

    /// Advances the frontier to the next free tuple. Returns false once the
    /// stored boxes cover everything at or above the frontier.
    bool compute_free_tuple();
    bool exhausted() const noexcept { return exhausted_; }

    const Tuple& frontier() const noexcept { return t_; }
    /// Replaces the frontier; it must not move backwards.
    void set_frontier(Tuple values);

    // Node-level access.
    NodeId root() const noexcept { return 0; }
    /// Node reached by `pattern` (kWildcard = '*'), or kNoNode.
    NodeId find(std::span<const Value> pattern) const;
    std::size_t node_depth(NodeId u) const { return nodes_[u].depth; }
    NodeId parent(NodeId u) const { return nodes_[u].parent; }
    NodeId wildcard_child(NodeId u) const { return nodes_[u].wildcard; }
    Value label(NodeId u) const { return nodes_[u].label; }
    const std::vector<Point>& points(NodeId u) const { return nodes_[u].points; }
    std::vector<std::pair<Value, Value>> intervals(NodeId u) const;
    int completeness(NodeId u) const { return nodes_[u].completeness; }
    bool is_complete(NodeId u) const { return nodes_[u].completeness >= 2; }
    std::uint64_t source_tags(NodeId u) const { return nodes_[u].source_tags; }
    std::size_t live_nodes() const noexcept { return nodes_.size() - free_.size(); }

    /// Smallest y >= x outside every interval of u.
    Value next(NodeId u, Value x) const;
    bool has_no_free_value(NodeId u) const { return next(u, kFrontierStart) >= kPosInf; }
    /// Merges the open interval (lo, hi) into u. Returns false when u
    /// already covered it.
    bool insert_interval(NodeId u, Value lo, Value hi);

    /// Free-value search over a chain given bottom (most specialised) first.
    /// Caches the covered stretch into the bottom node. On backtrack the
    /// search depth and frontier are updated as the join loop expects.
    std::pair<Value, bool> get_free_value(Value x, const std::vector<NodeId>& chain);
    /// Cuts off a node with no free value by ruling out the nearest concrete
    /// label above it; drives the depth below zero when there is none.
    void truncate(NodeId u);
    int depth() const noexcept { return depth_; }
    void set_depth(int d) { depth_ = d; }

    /// Forces completeness for node u; G lists the other nodes whose
    /// intervals are folded into u first.
    void mark_complete(NodeId u, const std::vector<NodeId>& generalizations);
    /// Free values recorded by a complete node, in order, from x upwards.
    std::vector<Value> iterate_complete(NodeId u, Value x, std::size_t limit = 1U << 20) const;

    /// Per-pattern counters used by the counting variant. The pattern is a
    /// prefix with kWildcard entries. store_count returns false when the
    /// pattern runs through a ruled-out label.
    std::optional<std::uint64_t> lookup_count(std::span<const Value> pattern) const;
    bool store_count(std::span<const Value> pattern, std::uint64_t count);

    /// Indented text dump: one line per node with its label, pointList,
    /// completeness and count.
    std::string dump() const;

private:
    struct Node {
        Value label = kWildcard;
        NodeId parent = kNoNode;
        std::uint32_t depth = 0;
        std::vector<Point> points;
        NodeId wildcard = kNoNode;
        std::uint64_t eq_mask = 0;
        std::uint64_t epoch = 0;
        std::uint64_t complete_epoch = 0;
        std::uint64_t source_tags = 0;
        std::uint64_t count = 0;
        bool has_count = false;
        bool has_intervals = false;
        std::uint8_t completeness = 0;
    };

    NodeId new_node(NodeId parent, Value label);
    void free_subtree(NodeId u);
    NodeId concrete_child(NodeId u, Value v) const;
    /// Child reached by label (creating it); kNoNode when the label is ruled out.
    NodeId descend_or_create(NodeId u, Value label);

    Value chase(Value x, std::size_t k, bool& backtracked);
    std::pair<Value, bool> free_value_non_chain(Value x);
    void backtrack_after_infinity();
    void build_filter(std::size_t d);
    void dump_node(NodeId u, int indent, std::string& out) const;

    std::size_t n_;
    Options options_;
    std::vector<Node> nodes_;
    std::vector<NodeId> free_;
    Tuple t_;
    int depth_ = 0;
    bool exhausted_ = false;
    std::uint64_t epoch_ = 0;
    std::vector<std::vector<NodeId>> matching_;  // per depth, nodes admitting the prefix
    std::vector<NodeId> g_;                      // principal filter, bottom first
    bool g_is_chain_ = true;
    Stats stats_;
};

}  // namespace wcoj
