#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wcoj/relation.hpp"

namespace wcoj {

/// Maps dense ids back to the ids used in the source file.
class NodeDictionary {
public:
    NodeDictionary() = default;
    explicit NodeDictionary(std::vector<std::int64_t> original_ids);

    std::size_t size() const noexcept { return original_.size(); }
    std::int64_t original(Value dense) const { return original_.at(static_cast<std::size_t>(dense)); }
    /// Dense id for an original id, or -1 when unknown.
    Value dense(std::int64_t original) const;
    const std::vector<std::int64_t>& originals() const noexcept { return original_; }

private:
    std::vector<std::int64_t> original_;
    std::unordered_map<std::int64_t, Value> index_;
};

struct Graph {
    Relation edges;  // binary relation `edge(src, dst)` over dense ids
    NodeDictionary nodes;

    std::size_t node_count() const noexcept { return nodes.size(); }
};

/// Parses SNAP edge-list text: one "u v" pair per line, '#' comments.
/// Self-loops and duplicate edges are dropped; with `undirected` both
/// orientations of every edge are stored. Ids are densified in ascending
/// order of the original id. Throws ParseError naming the 1-based line.
Graph parse_edge_list(std::string_view text, bool undirected);

/// Reads a SNAP file (plain or gzip-compressed) and parses it.
Graph load_edge_list(const std::filesystem::path& path, bool undirected);

/// Builds a graph from dense ids 0..node_count-1 and an edge list.
Graph make_graph(std::size_t node_count,
                 const std::vector<std::pair<Value, Value>>& edges,
                 bool undirected);

}  // namespace wcoj
