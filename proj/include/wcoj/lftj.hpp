#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wcoj/engine.hpp"
#include "wcoj/trie_index.hpp"

namespace wcoj {

/// Walks the distinct values of one index column inside a row range whose
/// earlier columns are fixed.
class LevelIterator {
public:
    LevelIterator(const TrieIndex& index, TrieIndex::Range rows, std::size_t col);

    bool at_end() const noexcept { return pos_ >= end_; }
    Value key() const { return index_->at(pos_, col_); }
    /// Moves to the next distinct value.
    void next();
    /// Moves to the least value >= v (galloping search).
    void seek(Value v);
    /// Rows carrying the current key.
    TrieIndex::Range block() const;

private:
    std::size_t gallop(Value v, bool strictly_greater) const;

    const TrieIndex* index_;
    std::size_t col_;
    std::size_t pos_;
    std::size_t end_;
};

/// Sorted intersection of the iterators' value sets.
std::vector<Value> leapfrog_intersect(std::vector<LevelIterator> iters);

/// Leapfrog TrieJoin over GAO positions [start, n), with the positions
/// before `start` bound by the caller. One runner may be reused for many
/// prefixes.
class LftjRunner {
public:
    using TupleFn = std::function<void(std::span<const Value>)>;

    LftjRunner(const PreparedQuery& pq, const EngineConfig& cfg, std::size_t start = 0);

    /// Enumerates all extensions of `prefix` (GAO order, length `start`).
    /// `on_tuple` receives full tuples in GAO order; pass nullptr to count.
    std::uint64_t run(std::span<const Value> prefix, const TupleFn* on_tuple);

private:
    struct Participant {
        std::size_t atom;
        std::size_t col;
    };
    struct Level {
        std::vector<Participant> parts;
        std::vector<std::pair<std::size_t, bool>> bounds;  // (other position, other is the smaller side)
        std::vector<LevelIterator> iters;
        std::size_t p = 0;
        bool done = false;
    };

    Value lower_bound_at(std::size_t d) const;
    Value upper_bound_at(std::size_t d) const;  // exclusive
    bool open(std::size_t d);
    void search(Level& lv, Value ub);
    void advance(Level& lv, Value ub);

    const PreparedQuery& pq_;
    const EngineConfig& cfg_;
    std::size_t start_;
    std::size_t n_;
    std::vector<Level> levels_;
    std::vector<std::vector<TrieIndex::Range>> ranges_;  // per atom, per column
    std::vector<Value> t_;
    unsigned poll_ = 0;
};

/// Invokes sink once per output tuple (query variable order) in GAO
/// lexicographic order; returns the count.
std::uint64_t lftj_enumerate(const PreparedQuery& pq, const EngineConfig& cfg, const Sink& sink);
std::uint64_t lftj_count(const PreparedQuery& pq, const EngineConfig& cfg);

}  // namespace wcoj
