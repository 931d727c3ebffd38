#include "wcoj/engine.hpp"

#include <algorithm>
#include <numeric>

#include "wcoj/error.hpp"

namespace wcoj {

void Database::add(Relation r) {
    const std::string name = r.name();
    relations_.insert_or_assign(name, std::move(r));
}

const Relation& Database::get(const std::string& name) const {
    auto it = relations_.find(name);
    if (it == relations_.end()) throw ConfigError("no relation named '" + name + "'");
    return it->second;
}

PreparedQuery PreparedQuery::build(const Query& q, const Database& db, const Gao& gao) {
    if (gao.order.size() != q.var_count()) throw ConfigError("GAO does not cover the query variables");
    PreparedQuery pq{q, gao, {}};
    const auto pos = gao.positions();
    std::map<std::pair<std::string, std::vector<std::size_t>>, std::shared_ptr<const TrieIndex>> shared;
    for (const Atom& atom : q.atoms()) {
        const Relation& rel = db.get(atom.relation);
        if (rel.arity() != atom.vars.size()) {
            throw ConfigError("atom " + atom.relation + " has " + std::to_string(atom.vars.size()) +
                              " arguments but the relation has arity " + std::to_string(rel.arity()));
        }
        std::vector<std::size_t> order(atom.vars.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return pos[atom.vars[a]] < pos[atom.vars[b]]; });
        auto& slot = shared[{atom.relation, order}];
        if (!slot) slot = std::make_shared<const TrieIndex>(rel, order);
        AtomIndex ai{slot, {}};
        for (std::size_t c : order) ai.column_depth.push_back(pos[atom.vars[c]]);
        pq.atoms.push_back(std::move(ai));
    }
    return pq;
}

void PreparedQuery::validate() const {
    if (atoms.size() != query.atoms().size()) throw ConfigError("one index per atom is required");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const AtomIndex& a = atoms[i];
        if (!a.index) throw ConfigError("missing index for atom " + query.atoms()[i].relation);
        if (a.index->arity() != a.column_depth.size()) throw ConfigError("index arity mismatch");
        for (std::size_t c = 1; c < a.column_depth.size(); ++c) {
            if (a.column_depth[c - 1] >= a.column_depth[c]) {
                throw ConfigError("index for atom " + query.atoms()[i].relation +
                                  " is not consistent with the GAO");
            }
        }
    }
}

std::vector<std::pair<std::size_t, std::size_t>> PreparedQuery::position_filters() const {
    const auto pos = gao.positions();
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const Filter& f : query.filters()) out.emplace_back(pos[f.less], pos[f.greater]);
    return out;
}

void PreparedQuery::to_query_order(std::span<const Value> gao_tuple, std::vector<Value>& out) const {
    out.resize(gao.order.size());
    for (std::size_t i = 0; i < gao.order.size(); ++i) out[gao.order[i]] = gao_tuple[i];
}

}  // namespace wcoj
