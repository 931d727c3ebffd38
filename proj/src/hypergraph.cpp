#include "wcoj/hypergraph.hpp"

#include <bit>

#include "wcoj/error.hpp"

namespace wcoj {

Hypergraph Hypergraph::of(const Query& q) {
    if (q.var_count() > 64) throw StructuralError("queries are limited to 64 variables");
    Hypergraph h;
    h.vertex_count = q.var_count();
    VarSet covered = 0;
    for (const Atom& a : q.atoms()) {
        VarSet e = 0;
        for (std::size_t v : a.vars) e |= bit(v);
        h.edges.push_back(e);
        covered |= e;
    }
    for (std::size_t v = 0; v < h.vertex_count; ++v) {
        if (!contains(covered, v)) throw StructuralError("vertex in no edge");
    }
    return h;
}

Hypergraph Hypergraph::subset(const std::vector<std::size_t>& edge_ids) const {
    Hypergraph h;
    h.vertex_count = vertex_count;
    for (std::size_t id : edge_ids) h.edges.push_back(edges.at(id));
    return h;
}

bool is_alpha_acyclic(const std::vector<VarSet>& input) {
    std::vector<VarSet> edges;
    for (VarSet e : input) {
        if (e != 0) edges.push_back(e);
    }
    bool changed = true;
    while (changed && edges.size() > 1) {
        changed = false;
        // Vertices that occur in exactly one edge.
        VarSet seen_once = 0, seen_twice = 0;
        for (VarSet e : edges) {
            seen_twice |= seen_once & e;
            seen_once |= e;
        }
        const VarSet lonely = seen_once & ~seen_twice;
        if (lonely) {
            for (VarSet& e : edges) e &= ~lonely;
            changed = true;
        }
        // Edges that are empty or contained in another edge.
        for (std::size_t i = 0; i < edges.size(); ++i) {
            bool drop = edges[i] == 0;
            for (std::size_t j = 0; !drop && j < edges.size(); ++j) {
                if (j != i && (edges[i] & ~edges[j]) == 0) drop = true;
            }
            if (drop) {
                edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return edges.size() <= 1;
}

bool is_beta_acyclic(const Hypergraph& h) {
    const std::size_t m = h.edges.size();
    if (m > 24) throw ConfigError("beta-acyclicity test limited to 24 atoms");
    std::vector<VarSet> sub;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << m); ++mask) {
        if (std::popcount(mask) < 3) continue;  // one or two edges are always acyclic
        sub.clear();
        for (std::size_t i = 0; i < m; ++i) {
            if ((mask >> i) & 1U) sub.push_back(h.edges[i]);
        }
        if (!is_alpha_acyclic(sub)) return false;
    }
    return true;
}

}  // namespace wcoj
