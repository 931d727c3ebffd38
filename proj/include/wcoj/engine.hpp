#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wcoj/gao.hpp"
#include "wcoj/query.hpp"
#include "wcoj/relation.hpp"
#include "wcoj/stop_token.hpp"
#include "wcoj/trie_index.hpp"

namespace wcoj {

/// Receives one output tuple, values in query variable order.
using Sink = std::function<void(std::span<const Value>)>;

/// Named base relations.
class Database {
public:
    void add(Relation r);
    bool has(const std::string& name) const { return relations_.count(name) != 0; }
    /// Throws ConfigError for an unknown name.
    const Relation& get(const std::string& name) const;
    const std::map<std::string, Relation>& relations() const noexcept { return relations_; }

private:
    std::map<std::string, Relation> relations_;
};

/// An atom's index: its columns sorted by GAO position.
struct AtomIndex {
    std::shared_ptr<const TrieIndex> index;
    std::vector<std::size_t> column_depth;  // GAO position of each index column
};

/// A query bound to its GAO and one GAO-consistent index per atom.
struct PreparedQuery {
    Query query;
    Gao gao;
    std::vector<AtomIndex> atoms;

    /// Builds (and shares between atoms) the indexes. Throws ConfigError when
    /// a relation is missing or an atom's arity disagrees with it.
    static PreparedQuery build(const Query& q, const Database& db, const Gao& gao);

    std::size_t arity() const noexcept { return gao.order.size(); }
    /// Checks that every atom has a GAO-consistent index.
    void validate() const;
    /// Filters translated to GAO positions: pairs (less, greater).
    std::vector<std::pair<std::size_t, std::size_t>> position_filters() const;
    /// Maps a tuple in GAO order to query variable order.
    void to_query_order(std::span<const Value> gao_tuple, std::vector<Value>& out) const;
};

struct EngineConfig {
    bool idea3 = true;   // probe cache
    bool idea5 = true;   // complete nodes
    bool idea6 = true;   // skeleton: only skeleton gaps enter the tree
    /// Shadow-probe a sample of cache-suppressed probes and throw on a
    /// disagreement.
    bool audit_probe_cache = false;
    /// Throw when a principal filter is not a chain (NEO runs only).
    bool assert_chain = false;
    /// Hybrid split depth: Minesweeper on GAO positions [0, split).
    std::optional<std::size_t> hybrid_split;
    /// Inclusive range for the first GAO attribute (job partitioning).
    Value first_lo = kNegInf;
    Value first_hi = kPosInf;
    const StopToken* stop = nullptr;
};

struct EngineStats {
    std::uint64_t free_tuples = 0;
    std::uint64_t probes = 0;
    std::uint64_t probes_skipped = 0;
    std::uint64_t audited = 0;
    std::uint64_t constraints_inserted = 0;
    std::uint64_t frontier_jumps = 0;
    std::uint64_t memo_hits = 0;
    std::uint64_t skeleton_atoms = 0;    // bit per atom whose gaps may enter the CDS
    std::uint64_t inserted_sources = 0;  // bit per atom whose gaps did
};

}  // namespace wcoj
