#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wcoj/value.hpp"

namespace wcoj {

/// A named set of fixed-arity tuples. Rows are kept sorted in column order
/// and deduplicated, so two relations with the same contents compare equal.
class Relation {
public:
    Relation() = default;
    Relation(std::string name, std::vector<std::string> attrs);
    Relation(std::string name, std::vector<std::string> attrs,
             const std::vector<Tuple>& tuples);

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& attrs() const noexcept { return attrs_; }
    std::size_t arity() const noexcept { return attrs_.size(); }
    std::size_t size() const noexcept {
        return arity() == 0 ? 0 : data_.size() / arity();
    }
    bool empty() const noexcept { return data_.empty(); }

    std::span<const Value> row(std::size_t i) const {
        return {data_.data() + i * arity(), arity()};
    }
    std::span<const Value> flat() const noexcept { return data_; }

    bool contains(std::span<const Value> tuple) const;
    std::vector<Tuple> tuples() const;

    /// Takes ownership of row-major data; sorts and removes duplicates.
    static Relation from_flat(std::string name, std::vector<std::string> attrs,
                              std::vector<Value> data);

    friend bool operator==(const Relation& a, const Relation& b) {
        return a.attrs_ == b.attrs_ && a.data_ == b.data_;
    }

private:
    void normalize();

    std::string name_;
    std::vector<std::string> attrs_;
    std::vector<Value> data_;
};

/// Sorts row-major data of the given arity lexicographically and drops
/// duplicate rows. Shared by Relation and TrieIndex.
void sort_unique_rows(std::vector<Value>& data, std::size_t arity);

}  // namespace wcoj
