#include "wcoj/oracle.hpp"

#include <algorithm>
#include <unordered_map>

#include "wcoj/error.hpp"

namespace wcoj {

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<Value>& k) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (Value v : k) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

struct AtomPlan {
    const Relation* rel = nullptr;
    std::vector<std::size_t> bound_cols;  // columns whose variable is already bound
    std::vector<std::size_t> free_cols;
    std::vector<std::size_t> vars;
    std::unordered_map<std::vector<Value>, std::vector<std::size_t>, KeyHash> lookup;
    std::vector<std::pair<std::size_t, std::size_t>> filters;  // checked once this atom binds
};

class NestedLoop {
public:
    NestedLoop(const Query& q, const Database& db, std::uint64_t budget, const StopToken* stop)
        : budget_(budget), stop_(stop), values_(q.var_count(), 0) {
        std::vector<bool> seen(q.var_count(), false);
        std::vector<bool> filter_done(q.filters().size(), false);
        for (const Atom& atom : q.atoms()) {
            AtomPlan plan;
            plan.rel = &db.get(atom.relation);
            if (plan.rel->arity() != atom.vars.size()) throw ConfigError("atom arity mismatch");
            plan.vars = atom.vars;
            for (std::size_t c = 0; c < atom.vars.size(); ++c) {
                (seen[atom.vars[c]] ? plan.bound_cols : plan.free_cols).push_back(c);
            }
            for (std::size_t c : plan.free_cols) seen[atom.vars[c]] = true;
            for (std::size_t f = 0; f < q.filters().size(); ++f) {
                const Filter& flt = q.filters()[f];
                if (!filter_done[f] && seen[flt.less] && seen[flt.greater]) {
                    plan.filters.emplace_back(flt.less, flt.greater);
                    filter_done[f] = true;
                }
            }
            std::vector<Value> key;
            for (std::size_t r = 0; r < plan.rel->size(); ++r) {
                auto row = plan.rel->row(r);
                key.clear();
                for (std::size_t c : plan.bound_cols) key.push_back(row[c]);
                plan.lookup[key].push_back(r);
            }
            plans_.push_back(std::move(plan));
        }
    }

    OracleResult run(std::vector<std::vector<Value>>* out) {
        out_ = out;
        try {
            descend(0);
        } catch (const BudgetExceeded&) {
            result_.too_slow = true;
        }
        return result_;
    }

private:
    struct BudgetExceeded {};

    void descend(std::size_t i) {
        if (i == plans_.size()) {
            ++result_.count;
            if (out_) out_->push_back(values_);
            return;
        }
        AtomPlan& plan = plans_[i];
        std::vector<Value> key;
        for (std::size_t c : plan.bound_cols) key.push_back(values_[plan.vars[c]]);
        auto it = plan.lookup.find(key);
        if (it == plan.lookup.end()) return;
        for (std::size_t r : it->second) {
            if (++work_ > budget_) throw BudgetExceeded{};
            if (stop_ && (work_ & 4095U) == 0 && stop_->stop_requested()) throw Interrupted();
            auto row = plan.rel->row(r);
            for (std::size_t c : plan.free_cols) values_[plan.vars[c]] = row[c];
            bool ok = true;
            for (auto [a, b] : plan.filters) {
                if (!(values_[a] < values_[b])) {
                    ok = false;
                    break;
                }
            }
            if (ok) descend(i + 1);
        }
    }

    std::uint64_t budget_;
    const StopToken* stop_;
    std::vector<AtomPlan> plans_;
    std::vector<Value> values_;
    std::vector<std::vector<Value>>* out_ = nullptr;
    std::uint64_t work_ = 0;
    OracleResult result_;
};

}  // namespace

OracleResult oracle_join(const Query& q, const Database& db, const Sink* sink, std::uint64_t budget,
                         const StopToken* stop) {
    NestedLoop loop(q, db, budget, stop);
    if (!sink) return loop.run(nullptr);
    std::vector<std::vector<Value>> rows;
    OracleResult r = loop.run(&rows);
    if (r.too_slow) return r;
    std::sort(rows.begin(), rows.end());
    for (const auto& row : rows) (*sink)(row);
    return r;
}

}  // namespace wcoj
