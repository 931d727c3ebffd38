#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wcoj/constraint.hpp"
#include "wcoj/engine.hpp"
#include "wcoj/trie_index.hpp"

namespace wcoj {

/// Remembers, per relation, the last gap box it returned and the last
/// projection it reported as a member, and answers a probe from them when
/// that is provably the same answer a real probe would give.
class ProbeCache {
public:
    /// `column_depth` lists the GAO position of each inspected index column.
    explicit ProbeCache(std::vector<std::size_t> column_depth);

    /// Cached answer for tuple t, or nullopt when a real probe is needed.
    std::optional<GapResult> lookup(std::span<const Value> t) const;
    void record(std::span<const Value> t, const GapResult& r);

private:
    std::vector<std::size_t> depth_;
    std::vector<Value> witness_;
    bool has_witness_ = false;
    std::optional<Constraint> gap_;
    std::size_t gap_col_ = 0;
};

/// Smallest tuple >= t outside box c (t must lie in c), or nullopt when
/// every tuple >= t is inside.
std::optional<Tuple> advance_past(const Constraint& c, std::span<const Value> t);

/// Minesweeper. Requires a NEO GAO on beta-acyclic queries unless Idea 6
/// is on, in which case a skeleton is used.
std::uint64_t ms_enumerate(const PreparedQuery& pq, const EngineConfig& cfg, const Sink& sink,
                           EngineStats* stats = nullptr);

/// Counting Minesweeper. Beta-acyclic, filter-free queries with a NEO GAO
/// reuse the counts of finished sub-searches; everything else counts by
/// enumeration.
std::uint64_t ms_count(const PreparedQuery& pq, const EngineConfig& cfg, EngineStats* stats = nullptr);
bool ms_count_fast_path(const PreparedQuery& pq);

/// Minesweeper over GAO positions [0, split) and LFTJ for the rest. The
/// prefix projection must be beta-acyclic with a NEO order; split == n
/// runs plain Minesweeper. Pass sink = nullptr to count.
std::uint64_t hybrid_join(const PreparedQuery& pq, std::size_t split, const EngineConfig& cfg,
                          const Sink* sink, EngineStats* stats = nullptr);

/// Default split for the hybrid engine: the GAO prefix up to and including
/// the first attribute of the cyclic core, shortened until its projection
/// is beta-acyclic with a NEO order. Acyclic queries get n.
std::size_t default_hybrid_split(const PreparedQuery& pq);

}  // namespace wcoj
