#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wcoj/constraint.hpp"
#include "wcoj/relation.hpp"

namespace wcoj {

/// Immutable sorted view of a relation under an attribute permutation.
///
/// Rows are stored flat in lexicographic order of the permuted columns, which
/// gives the same seek interface as a trie: the rows sharing a prefix form a
/// contiguous range, and the distinct values of the next column inside that
/// range are found by binary search.
class TrieIndex {
public:
    /// Half-open row range [lo, hi).
    struct Range {
        std::size_t lo = 0;
        std::size_t hi = 0;
        bool empty() const noexcept { return lo >= hi; }
    };

    TrieIndex() = default;
    /// `order[i]` is the relation column stored at index column i.
    TrieIndex(const Relation& relation, std::vector<std::size_t> order);
    /// Same, naming the columns by attribute.
    TrieIndex(const Relation& relation, const std::vector<std::string>& attr_order);

    const std::string& name() const noexcept { return name_; }
    std::size_t arity() const noexcept { return attrs_.size(); }
    std::size_t size() const noexcept { return arity() == 0 ? 0 : data_.size() / arity(); }
    bool empty() const noexcept { return data_.empty(); }
    /// Attribute names in index column order.
    const std::vector<std::string>& attrs() const noexcept { return attrs_; }
    const std::vector<std::size_t>& order() const noexcept { return order_; }

    std::span<const Value> row(std::size_t i) const {
        return {data_.data() + i * arity(), arity()};
    }
    Value at(std::size_t row, std::size_t col) const { return data_[row * arity() + col]; }
    std::span<const Value> flat() const noexcept { return data_; }

    Range all() const noexcept { return {0, size()}; }
    /// First row in `r` whose column `col` is >= v (rows in `r` agree on
    /// all columns before `col`).
    std::size_t lower_bound(Range r, std::size_t col, Value v) const;
    /// First row in `r` whose column `col` is > v.
    std::size_t upper_bound(Range r, std::size_t col, Value v) const;
    /// Sub-range of `r` whose column `col` equals v.
    Range narrow(Range r, std::size_t col, Value v) const {
        return {lower_bound(r, col, v), upper_bound(r, col, v)};
    }
    /// Rows starting with `prefix`; empty range when absent.
    Range prefix_range(std::span<const Value> prefix) const;

    bool contains_prefix(std::span<const Value> prefix) const;

    /// Strict neighbours of x among the extensions of `prefix`: the largest
    /// value < x (or -inf) and the smallest value > x (or +inf).
    /// Throws ContractViolation when the prefix is absent.
    std::pair<Value, Value> seek_bounds(std::span<const Value> prefix, Value x) const;

    /// Writes the sorted rows with a versioned header.
    void save(const std::filesystem::path& path) const;
    static TrieIndex load(const std::filesystem::path& path);

    friend bool operator==(const TrieIndex& a, const TrieIndex& b) {
        return a.attrs_ == b.attrs_ && a.data_ == b.data_;
    }

private:
    std::string name_;
    std::vector<std::string> attrs_;
    std::vector<std::size_t> order_;
    std::vector<Value> data_;
};

/// Outcome of probing one relation with a free tuple.
struct GapResult {
    bool member = false;
    std::optional<Constraint> gap;  // set iff !member

    static GapResult make_member() { return {true, std::nullopt}; }
    static GapResult make_gap(Constraint c) { return {false, std::move(c)}; }
};

/// Probes `index` with the full free tuple `t`. `column_depth[i]` is the GAO
/// position of index column i; these must increase (GAO-consistency).
/// Returns Member when the projection is stored, otherwise the maximal gap
/// box around it. Only the first `max_columns` columns are inspected when
/// given, which lets a caller probe a projection onto a GAO prefix.
GapResult seek_gap(const TrieIndex& index, std::span<const Value> t,
                   std::span<const std::size_t> column_depth,
                   std::size_t max_columns = static_cast<std::size_t>(-1));

/// Convenience overload: derives column depths from attribute names and
/// the GAO (a list of attribute names).
GapResult seek_gap(const TrieIndex& index, std::span<const Value> t,
                   const std::vector<std::string>& gao);

}  // namespace wcoj
