#include "wcoj/cds.hpp"

#include <algorithm>
#include <bit>

#include "wcoj/error.hpp"

namespace wcoj {

namespace {

using Points = std::vector<ConstraintTree::Point>;

Points::const_iterator first_at_least(const Points& pts, Value v) {
    return std::lower_bound(pts.begin(), pts.end(), v,
                            [](const ConstraintTree::Point& p, Value x) { return p.value < x; });
}

std::size_t index_at_least(const Points& pts, Value v) {
    return static_cast<std::size_t>(first_at_least(pts, v) - pts.begin());
}

std::size_t index_above(const Points& pts, Value v) {
    return static_cast<std::size_t>(
        std::upper_bound(pts.begin(), pts.end(), v,
                         [](Value x, const ConstraintTree::Point& p) { return x < p.value; }) -
        pts.begin());
}

}  // namespace

ConstraintTree::ConstraintTree(std::size_t arity) : ConstraintTree(arity, Options{}) {}

ConstraintTree::ConstraintTree(std::size_t arity, Options options)
    : n_(arity), options_(options), t_(arity, kFrontierStart), matching_(arity) {
    if (arity == 0 || arity > 64) throw ContractViolation("constraint tree arity must be in 1..64");
    nodes_.emplace_back();
}

NodeId ConstraintTree::new_node(NodeId parent, Value label) {
    NodeId id;
    if (!free_.empty()) {
        id = free_.back();
        free_.pop_back();
        nodes_[id] = Node{};
    } else {
        id = static_cast<NodeId>(nodes_.size());
        nodes_.emplace_back();
    }
    Node& p = nodes_[parent];
    Node& c = nodes_[id];
    c.label = label;
    c.parent = parent;
    c.depth = p.depth + 1;
    c.eq_mask = p.eq_mask | (label == kWildcard ? 0 : std::uint64_t{1} << p.depth);
    return id;
}

void ConstraintTree::free_subtree(NodeId u) {
    std::vector<NodeId> stack{u};
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        Node& node = nodes_[v];
        for (const Point& p : node.points) {
            if (p.child != kNoNode) stack.push_back(p.child);
        }
        if (node.wildcard != kNoNode) stack.push_back(node.wildcard);
        node = Node{};
        free_.push_back(v);
    }
}

NodeId ConstraintTree::concrete_child(NodeId u, Value v) const {
    const Points& pts = nodes_[u].points;
    auto it = first_at_least(pts, v);
    return (it != pts.end() && it->value == v) ? it->child : kNoNode;
}

NodeId ConstraintTree::descend_or_create(NodeId u, Value label) {
    if (label == kWildcard) {
        if (nodes_[u].wildcard == kNoNode) {
            const NodeId c = new_node(u, kWildcard);
            nodes_[u].wildcard = c;
        }
        return nodes_[u].wildcard;
    }
    {
        const Points& pts = nodes_[u].points;
        const std::size_t i = index_at_least(pts, label);
        if (i < pts.size() && pts[i].value == label && pts[i].child != kNoNode) return pts[i].child;
        if (next(u, label) != label) return kNoNode;
    }
    const NodeId c = new_node(u, label);
    Points& pts = nodes_[u].points;
    const std::size_t i = index_at_least(pts, label);
    if (i < pts.size() && pts[i].value == label) {
        pts[i].child = c;
    } else {
        pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(i), Point{label, false, false, c});
    }
    return c;
}

Value ConstraintTree::next(NodeId u, Value x) const {
    const Points& pts = nodes_[u].points;
    auto it = first_at_least(pts, x);
    if (it == pts.begin()) return x;
    auto prev = it - 1;
    if (prev->left && it != pts.end() && x < it->value) return it->value;
    return x;
}

bool ConstraintTree::insert_interval(NodeId u, Value lo, Value hi) {
    if (hi <= lo + 1) return false;  // no integer inside
    Points& pts = nodes_[u].points;
    Value left = lo, right = hi;

    const std::size_t i = index_above(pts, lo);
    if (i > 0 && pts[i - 1].left) {
        if (pts[i].value >= hi) return false;  // already covered
        left = pts[i - 1].value;
    }
    const std::size_t j = index_at_least(pts, hi);
    if (j > 0 && pts[j - 1].left) right = pts[j].value;

    std::size_t a = index_at_least(pts, left);
    const bool have_left = a < pts.size() && pts[a].value == left;
    const std::size_t first_inside = have_left ? a + 1 : a;
    const std::size_t end_inside = index_at_least(pts, right);

    std::vector<NodeId> doomed;
    for (std::size_t k = first_inside; k < end_inside; ++k) {
        if (pts[k].child != kNoNode) doomed.push_back(pts[k].child);
    }
    pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(first_inside),
              pts.begin() + static_cast<std::ptrdiff_t>(end_inside));

    if (have_left) {
        pts[a].left = true;
    } else {
        pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(a), Point{left, true, false, kNoNode});
    }
    const std::size_t b = a + 1;
    if (b < pts.size() && pts[b].value == right) {
        pts[b].right = true;
    } else {
        pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(b), Point{right, false, true, kNoNode});
    }

    Node& node = nodes_[u];
    node.has_intervals = true;
    node.epoch = ++epoch_;
    for (NodeId d : doomed) free_subtree(d);
    return true;
}

std::vector<std::pair<Value, Value>> ConstraintTree::intervals(NodeId u) const {
    std::vector<std::pair<Value, Value>> out;
    const Points& pts = nodes_[u].points;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i].left) out.emplace_back(pts[i].value, pts[i + 1].value);
    }
    return out;
}

bool ConstraintTree::insert(const Constraint& c, unsigned source) {
    if (c.arity() != n_) throw ContractViolation("constraint arity does not match the tree");
    NodeId u = root();
    for (Value label : c.pattern()) {
        u = descend_or_create(u, label);
        if (u == kNoNode) return false;
    }
    ++stats_.constraints;
    if (source < 64) nodes_[u].source_tags |= std::uint64_t{1} << source;
    return insert_interval(u, c.lo(), c.hi());
}

NodeId ConstraintTree::find(std::span<const Value> pattern) const {
    NodeId u = root();
    for (Value label : pattern) {
        u = label == kWildcard ? nodes_[u].wildcard : concrete_child(u, label);
        if (u == kNoNode) return kNoNode;
    }
    return u;
}

void ConstraintTree::set_frontier(Tuple values) {
    if (values.size() != n_) throw ContractViolation("frontier arity mismatch");
    if (std::lexicographical_compare(values.begin(), values.end(), t_.begin(), t_.end())) {
        throw ContractViolation("frontier may not move backwards");
    }
    t_ = std::move(values);
}

void ConstraintTree::truncate(NodeId u) {
    ++stats_.truncations;
    while (depth_ >= 0) {
        --depth_;
        if (depth_ < 0) return;
        const NodeId v = nodes_[u].parent;
        const Value x = nodes_[u].label;
        if (x != kWildcard) {
            insert_interval(v, x - 1, x + 1);
            return;
        }
        u = v;
    }
}

void ConstraintTree::backtrack_after_infinity() {
    ++stats_.backtracks;
    --depth_;
    if (depth_ >= 0) ++t_[static_cast<std::size_t>(depth_)];
}

Value ConstraintTree::chase(Value x, std::size_t k, bool& backtracked) {
    if (k == g_.size()) return x;
    const NodeId u = g_[k];
    Value y = x;
    while (true) {
        y = next(u, y);
        const Value z = chase(y, k + 1, backtracked);
        if (backtracked) return kPosInf;
        if (z == y) break;
        y = z;
    }
    if (y > x && insert_interval(u, x - 1, y)) ++stats_.cached_intervals;
    if (has_no_free_value(u)) {
        truncate(u);
        backtracked = true;
    }
    return y;
}

std::pair<Value, bool> ConstraintTree::free_value_non_chain(Value x) {
    Value y = x;
    while (y < kPosInf) {
        const Value before = y;
        for (NodeId w : g_) y = next(w, y);
        if (y == before) break;
    }
    for (std::size_t k = g_.size(); k-- > 0;) {
        if (has_no_free_value(g_[k])) {
            truncate(g_[k]);
            return {kPosInf, true};
        }
    }
    // The covered stretch is a fact about the meet of the filter: the node
    // fixing every position some filter node fixes.
    std::uint64_t mask = 0;
    for (NodeId w : g_) mask |= nodes_[w].eq_mask;
    const auto d = static_cast<std::size_t>(depth_);
    NodeId meet = root();
    for (std::size_t p = 0; p < d && meet != kNoNode; ++p) {
        meet = descend_or_create(meet, (mask >> p) & 1U ? t_[p] : kWildcard);
    }
    if (meet != kNoNode) {
        if (std::find(matching_[d].begin(), matching_[d].end(), meet) == matching_[d].end()) {
            matching_[d].push_back(meet);
        }
        if (y > x && insert_interval(meet, x - 1, y)) ++stats_.cached_intervals;
        if (has_no_free_value(meet)) {
            truncate(meet);
            return {kPosInf, true};
        }
    }
    if (y >= kPosInf) {
        backtrack_after_infinity();
        return {kPosInf, true};
    }
    return {y, false};
}

std::pair<Value, bool> ConstraintTree::get_free_value(Value x, const std::vector<NodeId>& chain) {
    if (&chain != &g_) {
        g_ = chain;
        g_is_chain_ = true;
    }
    if (g_.empty()) return {x, false};
    if (!g_is_chain_) return free_value_non_chain(x);

    const NodeId v = g_[0];
    if (options_.complete_nodes && nodes_[v].completeness >= 2) {
        const Value y = next(v, x);
        bool agrees = true;
        for (std::size_t k = 1; k < g_.size() && agrees; ++k) {
            const NodeId w = g_[k];
            if (nodes_[w].epoch > nodes_[v].complete_epoch && next(w, y) != y) agrees = false;
        }
        if (agrees) {
            ++stats_.streamed;
            if (has_no_free_value(v)) {
                truncate(v);
                return {kPosInf, true};
            }
            if (y >= kPosInf) {
                backtrack_after_infinity();
                return {kPosInf, true};
            }
            return {y, false};
        }
    }

    bool backtracked = false;
    const Value y = chase(x, 0, backtracked);
    if (backtracked) return {kPosInf, true};
    if (y >= kPosInf) {
        Node& bottom = nodes_[v];
        if (bottom.completeness < 2 && ++bottom.completeness == 2) {
            mark_complete(v, std::vector<NodeId>(g_.begin() + 1, g_.end()));
        }
        backtrack_after_infinity();
        return {kPosInf, true};
    }
    return {y, false};
}

void ConstraintTree::mark_complete(NodeId u, const std::vector<NodeId>& generalizations) {
    for (NodeId w : generalizations) {
        for (auto [a, b] : intervals(w)) insert_interval(u, a, b);
    }
    nodes_[u].completeness = 2;
    nodes_[u].complete_epoch = epoch_;
}

std::vector<Value> ConstraintTree::iterate_complete(NodeId u, Value x, std::size_t limit) const {
    std::vector<Value> out;
    if (nodes_[u].completeness < 2) return out;
    for (Value y = next(u, x); y < kPosInf && out.size() < limit; y = next(u, y + 1)) out.push_back(y);
    return out;
}

void ConstraintTree::build_filter(std::size_t d) {
    g_.clear();
    for (NodeId u : matching_[d]) {
        if (nodes_[u].has_intervals) g_.push_back(u);
    }
    std::sort(g_.begin(), g_.end(), [&](NodeId a, NodeId b) {
        return std::popcount(nodes_[a].eq_mask) > std::popcount(nodes_[b].eq_mask);
    });
    g_is_chain_ = true;
    for (std::size_t k = 1; k < g_.size(); ++k) {
        if ((nodes_[g_[k]].eq_mask & ~nodes_[g_[k - 1]].eq_mask) != 0) {
            g_is_chain_ = false;
            break;
        }
    }
    if (!g_is_chain_) {
        ++stats_.non_chain_filters;
        if (options_.require_chain) {
            throw ContractViolation("principal filter at depth " + std::to_string(d) + " is not a chain");
        }
    }
}

bool ConstraintTree::compute_free_tuple() {
    if (exhausted_) return false;
    depth_ = 0;
    matching_[0].assign(1, root());
    while (true) {
        const auto d = static_cast<std::size_t>(depth_);
        build_filter(d);
        const Value x = t_[d];
        auto [y, backtracked] = get_free_value(x, g_);
        if (backtracked) {
            if (depth_ < 0) {
                exhausted_ = true;
                return false;
            }
            std::fill(t_.begin() + depth_ + 1, t_.end(), kFrontierStart);
            continue;
        }
        t_[d] = y;
        if (y > x) std::fill(t_.begin() + depth_ + 1, t_.end(), kFrontierStart);
        if (d + 1 == n_) break;

        auto& below = matching_[d + 1];
        below.clear();
        for (NodeId u : matching_[d]) {
            const NodeId c = concrete_child(u, y);
            if (c != kNoNode) below.push_back(c);
            if (nodes_[u].wildcard != kNoNode) below.push_back(nodes_[u].wildcard);
        }
        if (below.empty()) break;
        ++depth_;
    }
    ++stats_.free_tuples;
    return true;
}

std::optional<std::uint64_t> ConstraintTree::lookup_count(std::span<const Value> pattern) const {
    const NodeId u = find(pattern);
    if (u == kNoNode || !nodes_[u].has_count) return std::nullopt;
    return nodes_[u].count;
}

bool ConstraintTree::store_count(std::span<const Value> pattern, std::uint64_t count) {
    NodeId u = root();
    for (Value label : pattern) {
        u = descend_or_create(u, label);
        if (u == kNoNode) return false;
    }
    nodes_[u].count = count;
    nodes_[u].has_count = true;
    return true;
}

void ConstraintTree::dump_node(NodeId u, int indent, std::string& out) const {
    const Node& node = nodes_[u];
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    out += u == root() ? "root" : value_to_string(node.label);
    out += ':';
    bool first = true;
    for (const Point& p : node.points) {
        if (!p.left && !p.right) continue;
        out += first ? " " : ",";
        first = false;
        out += '(' + value_to_string(p.value) + ',';
        out += p.left && p.right ? "L&R" : (p.left ? "L" : "R");
        out += ')';
    }
    if (node.completeness) out += " completeness=" + std::to_string(node.completeness);
    if (node.has_count) out += " count=" + std::to_string(node.count);
    out += '\n';
    for (const Point& p : node.points) {
        if (p.child != kNoNode) dump_node(p.child, indent + 1, out);
    }
    if (node.wildcard != kNoNode) dump_node(node.wildcard, indent + 1, out);
}

std::string ConstraintTree::dump() const {
    std::string out;
    dump_node(root(), 0, out);
    return out;
}

}  // namespace wcoj
