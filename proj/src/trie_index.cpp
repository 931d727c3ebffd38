#include "wcoj/trie_index.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "wcoj/error.hpp"

namespace wcoj {

namespace {

constexpr char kMagic[8] = {'W', 'C', 'O', 'J', 'I', 'D', 'X', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

std::vector<std::size_t> order_from_names(const Relation& rel, const std::vector<std::string>& names) {
    std::vector<std::size_t> order;
    order.reserve(names.size());
    for (const auto& n : names) {
        auto it = std::find(rel.attrs().begin(), rel.attrs().end(), n);
        if (it == rel.attrs().end()) {
            throw ConfigError("attribute '" + n + "' is not in relation " + rel.name());
        }
        order.push_back(static_cast<std::size_t>(it - rel.attrs().begin()));
    }
    return order;
}

template <class T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw ConfigError("truncated index file");
    return v;
}

void put_string(std::ostream& out, const std::string& s) {
    put<std::uint64_t>(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
    const auto n = get<std::uint64_t>(in);
    std::string s(n, '\0');
    in.read(s.data(), static_cast<std::streamsize>(n));
    if (!in) throw ConfigError("truncated index file");
    return s;
}

}  // namespace

TrieIndex::TrieIndex(const Relation& relation, std::vector<std::size_t> order)
    : name_(relation.name()), order_(std::move(order)) {
    const std::size_t k = relation.arity();
    std::vector<bool> seen(k, false);
    if (order_.size() != k) throw ConfigError("index order is not a permutation of " + name_);
    for (std::size_t c : order_) {
        if (c >= k || seen[c]) throw ConfigError("index order is not a permutation of " + name_);
        seen[c] = true;
    }
    for (std::size_t c : order_) attrs_.push_back(relation.attrs()[c]);

    data_.resize(relation.flat().size());
    for (std::size_t r = 0; r < relation.size(); ++r) {
        auto src = relation.row(r);
        for (std::size_t i = 0; i < k; ++i) data_[r * k + i] = src[order_[i]];
    }
    sort_unique_rows(data_, k);
}

TrieIndex::TrieIndex(const Relation& relation, const std::vector<std::string>& attr_order)
    : TrieIndex(relation, order_from_names(relation, attr_order)) {}

std::size_t TrieIndex::lower_bound(Range r, std::size_t col, Value v) const {
    const std::size_t k = arity();
    std::size_t lo = r.lo, hi = r.hi;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (data_[mid * k + col] < v) lo = mid + 1; else hi = mid;
    }
    return lo;
}

std::size_t TrieIndex::upper_bound(Range r, std::size_t col, Value v) const {
    const std::size_t k = arity();
    std::size_t lo = r.lo, hi = r.hi;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (data_[mid * k + col] <= v) lo = mid + 1; else hi = mid;
    }
    return lo;
}

TrieIndex::Range TrieIndex::prefix_range(std::span<const Value> prefix) const {
    if (prefix.size() > arity()) throw ContractViolation("prefix longer than index arity");
    Range r = all();
    for (std::size_t j = 0; j < prefix.size() && !r.empty(); ++j) r = narrow(r, j, prefix[j]);
    return r;
}

bool TrieIndex::contains_prefix(std::span<const Value> prefix) const {
    return !prefix_range(prefix).empty();
}

std::pair<Value, Value> TrieIndex::seek_bounds(std::span<const Value> prefix, Value x) const {
    if (prefix.size() >= arity()) throw ContractViolation("seek_bounds needs a proper prefix");
    const Range r = prefix_range(prefix);
    if (r.empty()) throw ContractViolation("seek_bounds called with an absent prefix");
    const std::size_t col = prefix.size();
    const std::size_t lb = lower_bound(r, col, x);
    const std::size_t ub = upper_bound(r, col, x);
    const Value glb = lb > r.lo ? at(lb - 1, col) : kNegInf;
    const Value lub = ub < r.hi ? at(ub, col) : kPosInf;
    return {glb, lub};
}

void TrieIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out.write(kMagic, sizeof kMagic);
    put(out, kFormatVersion);
    put_string(out, name_);
    put<std::uint64_t>(out, attrs_.size());
    for (std::size_t i = 0; i < attrs_.size(); ++i) {
        put_string(out, attrs_[i]);
        put<std::uint64_t>(out, order_[i]);
    }
    put<std::uint64_t>(out, data_.size());
    out.write(reinterpret_cast<const char*>(data_.data()),
              static_cast<std::streamsize>(data_.size() * sizeof(Value)));
}

TrieIndex TrieIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    char magic[sizeof kMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw ConfigError(path.string() + " is not an index cache file");
    }
    if (get<std::uint32_t>(in) != kFormatVersion) {
        throw ConfigError(path.string() + " has an unsupported index cache version");
    }
    TrieIndex idx;
    idx.name_ = get_string(in);
    const auto k = get<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < k; ++i) {
        idx.attrs_.push_back(get_string(in));
        idx.order_.push_back(static_cast<std::size_t>(get<std::uint64_t>(in)));
    }
    const auto n = get<std::uint64_t>(in);
    idx.data_.resize(n);
    in.read(reinterpret_cast<char*>(idx.data_.data()), static_cast<std::streamsize>(n * sizeof(Value)));
    if (!in) throw ConfigError("truncated index file");
    return idx;
}

GapResult seek_gap(const TrieIndex& index, std::span<const Value> t,
                   std::span<const std::size_t> column_depth, std::size_t max_columns) {
    const std::size_t k = std::min(index.arity(), max_columns);
    TrieIndex::Range range = index.all();
    for (std::size_t j = 0; j < k; ++j) {
        const Value v = t[column_depth[j]];
        const std::size_t lb = index.lower_bound(range, j, v);
        const std::size_t ub = index.upper_bound({lb, range.hi}, j, v);
        if (lb == ub) {
            const Value lo = lb > range.lo ? index.at(lb - 1, j) : kNegInf;
            const Value hi = ub < range.hi ? index.at(ub, j) : kPosInf;
            std::vector<Value> pattern(column_depth[j], kWildcard);
            for (std::size_t p = 0; p < j; ++p) pattern[column_depth[p]] = t[column_depth[p]];
            return GapResult::make_gap(Constraint(t.size(), std::move(pattern), lo, hi));
        }
        range = {lb, ub};
    }
    return GapResult::make_member();
}

GapResult seek_gap(const TrieIndex& index, std::span<const Value> t,
                   const std::vector<std::string>& gao) {
    std::vector<std::size_t> depth;
    for (const auto& a : index.attrs()) {
        auto it = std::find(gao.begin(), gao.end(), a);
        if (it == gao.end()) throw ConfigError("index attribute '" + a + "' is not in the GAO");
        depth.push_back(static_cast<std::size_t>(it - gao.begin()));
    }
    if (!std::is_sorted(depth.begin(), depth.end())) {
        throw ContractViolation("index order of " + index.name() + " is not GAO-consistent");
    }
    return seek_gap(index, t, depth);
}

}  // namespace wcoj
