#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wcoj/query.hpp"

namespace wcoj {

/// Vertex sets are bitmasks; queries are limited to 64 variables.
using VarSet = std::uint64_t;

/// Query hypergraph: one vertex per variable, one edge per atom (a multiset).
struct Hypergraph {
    std::size_t vertex_count = 0;
    std::vector<VarSet> edges;

    /// Throws StructuralError when a vertex lies in no edge.
    static Hypergraph of(const Query& q);
    Hypergraph subset(const std::vector<std::size_t>& edge_ids) const;
};

/// GYO reduction on the given edges: drop vertices that occur in a single
/// edge and edges contained in another edge until nothing changes.
bool is_alpha_acyclic(const std::vector<VarSet>& edges);

/// Every non-empty sub-multiset of edges is alpha-acyclic.
bool is_beta_acyclic(const Hypergraph& h);

inline bool contains(VarSet s, std::size_t v) { return (s >> v) & 1U; }
inline VarSet bit(std::size_t v) { return VarSet{1} << v; }

}  // namespace wcoj
