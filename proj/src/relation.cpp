#include "wcoj/relation.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "wcoj/error.hpp"

namespace wcoj {

void sort_unique_rows(std::vector<Value>& data, std::size_t arity) {
    if (arity == 0 || data.empty()) return;
    const std::size_t rows = data.size() / arity;
    if (arity == 1) {
        std::sort(data.begin(), data.end());
        data.erase(std::unique(data.begin(), data.end()), data.end());
        return;
    }
    if (arity == 2) {
        std::vector<std::pair<Value, Value>> pairs(rows);
        for (std::size_t i = 0; i < rows; ++i) pairs[i] = {data[2 * i], data[2 * i + 1]};
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        data.resize(pairs.size() * 2);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            data[2 * i] = pairs[i].first;
            data[2 * i + 1] = pairs[i].second;
        }
        return;
    }
    std::vector<std::size_t> idx(rows);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto row_less = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(data.begin() + a * arity, data.begin() + (a + 1) * arity,
                                            data.begin() + b * arity, data.begin() + (b + 1) * arity);
    };
    auto row_eq = [&](std::size_t a, std::size_t b) {
        return std::equal(data.begin() + a * arity, data.begin() + (a + 1) * arity,
                          data.begin() + b * arity);
    };
    std::sort(idx.begin(), idx.end(), row_less);
    idx.erase(std::unique(idx.begin(), idx.end(), row_eq), idx.end());
    std::vector<Value> out;
    out.reserve(idx.size() * arity);
    for (std::size_t r : idx) {
        out.insert(out.end(), data.begin() + r * arity, data.begin() + (r + 1) * arity);
    }
    data = std::move(out);
}

Relation::Relation(std::string name, std::vector<std::string> attrs)
    : name_(std::move(name)), attrs_(std::move(attrs)) {}

Relation::Relation(std::string name, std::vector<std::string> attrs,
                   const std::vector<Tuple>& tuples)
    : name_(std::move(name)), attrs_(std::move(attrs)) {
    data_.reserve(tuples.size() * arity());
    for (const Tuple& t : tuples) {
        if (t.size() != arity()) {
            throw ContractViolation("tuple arity " + std::to_string(t.size()) +
                                    " does not match relation " + name_);
        }
        data_.insert(data_.end(), t.begin(), t.end());
    }
    normalize();
}

Relation Relation::from_flat(std::string name, std::vector<std::string> attrs,
                             std::vector<Value> data) {
    Relation r(std::move(name), std::move(attrs));
    if (r.arity() == 0 || data.size() % r.arity() != 0) {
        throw ContractViolation("flat data size is not a multiple of the arity");
    }
    r.data_ = std::move(data);
    r.normalize();
    return r;
}

void Relation::normalize() { sort_unique_rows(data_, arity()); }

bool Relation::contains(std::span<const Value> tuple) const {
    if (tuple.size() != arity() || empty()) return false;
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        auto r = row(mid);
        if (std::lexicographical_compare(r.begin(), r.end(), tuple.begin(), tuple.end())) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo < size() && std::equal(tuple.begin(), tuple.end(), row(lo).begin());
}

std::vector<Tuple> Relation::tuples() const {
    std::vector<Tuple> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        auto r = row(i);
        out.emplace_back(r.begin(), r.end());
    }
    return out;
}

}  // namespace wcoj
