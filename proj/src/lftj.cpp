#include "wcoj/lftj.hpp"

#include <algorithm>

#include "wcoj/error.hpp"

namespace wcoj {

LevelIterator::LevelIterator(const TrieIndex& index, TrieIndex::Range rows, std::size_t col)
    : index_(&index), col_(col), pos_(rows.lo), end_(rows.hi) {}

std::size_t LevelIterator::gallop(Value v, bool strictly_greater) const {
    auto before = [&](std::size_t row) {
        const Value x = index_->at(row, col_);
        return strictly_greater ? x <= v : x < v;
    };
    std::size_t lo = pos_, step = 1;
    std::size_t hi = lo + step;
    while (hi < end_ && before(hi)) {
        lo = hi;
        step <<= 1;
        hi = lo + step;
    }
    if (hi > end_) hi = end_;
    // First row in [lo, hi) that is not before v; row lo itself may qualify.
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (before(mid)) lo = mid + 1;
        else hi = mid;
    }
    return lo;
}

void LevelIterator::next() { pos_ = gallop(key(), true); }

void LevelIterator::seek(Value v) {
    if (at_end() || key() >= v) return;
    pos_ = gallop(v, false);
}

TrieIndex::Range LevelIterator::block() const { return {pos_, gallop(key(), true)}; }

std::vector<Value> leapfrog_intersect(std::vector<LevelIterator> iters) {
    std::vector<Value> out;
    if (iters.empty()) return out;
    for (const auto& it : iters) {
        if (it.at_end()) return out;
    }
    std::sort(iters.begin(), iters.end(),
              [](const LevelIterator& a, const LevelIterator& b) { return a.key() < b.key(); });
    const std::size_t k = iters.size();
    std::size_t p = 0;
    Value max = iters[k - 1].key();
    while (true) {
        LevelIterator& it = iters[p];
        if (it.key() == max) {
            out.push_back(max);
            it.next();
        } else {
            it.seek(max);
        }
        if (it.at_end()) return out;
        max = std::max(max, it.key());
        p = (p + 1) % k;
    }
}

LftjRunner::LftjRunner(const PreparedQuery& pq, const EngineConfig& cfg, std::size_t start)
    : pq_(pq), cfg_(cfg), start_(start), n_(pq.arity()), levels_(pq.arity()), t_(pq.arity(), 0) {
    pq.validate();
    if (start > n_) throw ConfigError("LFTJ start depth beyond the query arity");
    for (std::size_t a = 0; a < pq.atoms.size(); ++a) {
        const auto& depths = pq.atoms[a].column_depth;
        for (std::size_t c = 0; c < depths.size(); ++c) {
            if (depths[c] >= start) levels_[depths[c]].parts.push_back({a, c});
        }
        ranges_.emplace_back(depths.size() + 1);
    }
    for (auto [less, greater] : pq.position_filters()) {
        if (less > greater && less >= start) levels_[less].bounds.emplace_back(greater, false);
        if (greater > less && greater >= start) levels_[greater].bounds.emplace_back(less, true);
    }
}

Value LftjRunner::lower_bound_at(std::size_t d) const {
    Value lb = d == 0 ? cfg_.first_lo : kNegInf;
    for (auto [other, other_smaller] : levels_[d].bounds) {
        if (other_smaller) lb = std::max(lb, t_[other] + 1);
    }
    return lb;
}

Value LftjRunner::upper_bound_at(std::size_t d) const {
    Value ub = d == 0 && cfg_.first_hi < kPosInf ? cfg_.first_hi + 1 : kPosInf;
    for (auto [other, other_smaller] : levels_[d].bounds) {
        if (!other_smaller) ub = std::min(ub, t_[other]);
    }
    return ub;
}

void LftjRunner::search(Level& lv, Value ub) {
    const std::size_t k = lv.iters.size();
    Value max = lv.iters[(lv.p + k - 1) % k].key();
    while (true) {
        LevelIterator& it = lv.iters[lv.p];
        if (it.key() == max) break;
        it.seek(max);
        if (it.at_end()) {
            lv.done = true;
            return;
        }
        max = it.key();
        lv.p = (lv.p + 1) % k;
    }
    if (max >= ub) lv.done = true;
}

void LftjRunner::advance(Level& lv, Value ub) {
    LevelIterator& it = lv.iters[lv.p];
    it.next();
    if (it.at_end()) {
        lv.done = true;
        return;
    }
    lv.p = (lv.p + 1) % lv.iters.size();
    search(lv, ub);
}

bool LftjRunner::open(std::size_t d) {
    Level& lv = levels_[d];
    lv.iters.clear();
    lv.done = false;
    lv.p = 0;
    const Value lb = lower_bound_at(d);
    for (const Participant& part : lv.parts) {
        lv.iters.emplace_back(*pq_.atoms[part.atom].index, ranges_[part.atom][part.col], part.col);
        LevelIterator& it = lv.iters.back();
        if (lb > kNegInf) it.seek(lb);
        if (it.at_end()) {
            lv.done = true;
            return false;
        }
    }
    std::sort(lv.iters.begin(), lv.iters.end(),
              [](const LevelIterator& a, const LevelIterator& b) { return a.key() < b.key(); });
    search(lv, upper_bound_at(d));
    return !lv.done;
}

std::uint64_t LftjRunner::run(std::span<const Value> prefix, const TupleFn* on_tuple) {
    if (prefix.size() != start_) throw ContractViolation("LFTJ prefix length must equal the start depth");
    std::copy(prefix.begin(), prefix.end(), t_.begin());
    for (std::size_t a = 0; a < pq_.atoms.size(); ++a) {
        const auto& idx = *pq_.atoms[a].index;
        const auto& depths = pq_.atoms[a].column_depth;
        TrieIndex::Range r = idx.all();
        ranges_[a][0] = r;
        for (std::size_t c = 0; c < depths.size() && depths[c] < start_; ++c) {
            r = idx.narrow(r, c, prefix[depths[c]]);
            if (r.empty()) return 0;
            ranges_[a][c + 1] = r;
        }
    }
    if (start_ == n_) {
        if (on_tuple) (*on_tuple)(t_);
        return 1;
    }

    std::uint64_t count = 0;
    std::size_t d = start_;
    open(d);
    while (true) {
        if (cfg_.stop) cfg_.stop->poll(poll_);
        Level& lv = levels_[d];
        if (lv.done) {
            if (d == start_) break;
            --d;
            advance(levels_[d], upper_bound_at(d));
            continue;
        }
        const Value v = lv.iters[lv.p].key();
        t_[d] = v;
        if (d + 1 == n_) {
            ++count;
            if (on_tuple) (*on_tuple)(t_);
            advance(lv, upper_bound_at(d));
            continue;
        }
        for (const Participant& part : lv.parts) {
            const auto& idx = *pq_.atoms[part.atom].index;
            ranges_[part.atom][part.col + 1] = idx.narrow(ranges_[part.atom][part.col], part.col, v);
        }
        ++d;
        open(d);
    }
    return count;
}

std::uint64_t lftj_enumerate(const PreparedQuery& pq, const EngineConfig& cfg, const Sink& sink) {
    LftjRunner runner(pq, cfg, 0);
    std::vector<Value> out;
    LftjRunner::TupleFn fn = [&](std::span<const Value> t) {
        pq.to_query_order(t, out);
        sink(out);
    };
    return runner.run({}, &fn);
}

std::uint64_t lftj_count(const PreparedQuery& pq, const EngineConfig& cfg) {
    LftjRunner runner(pq, cfg, 0);
    return runner.run({}, nullptr);
}

}  // namespace wcoj
