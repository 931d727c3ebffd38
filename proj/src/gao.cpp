#include "wcoj/gao.hpp"

#include <algorithm>
#include <numeric>

#include "wcoj/error.hpp"

namespace wcoj {

std::vector<std::size_t> Gao::positions() const {
    std::vector<std::size_t> pos(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    return pos;
}

std::vector<std::string> Gao::names(const Query& q) const {
    std::vector<std::string> out;
    for (std::size_t v : order) out.push_back(q.var_names().at(v));
    return out;
}

bool is_neo(const Hypergraph& h, const std::vector<std::size_t>& order) {
    VarSet prefix = 0;
    std::vector<VarSet> family;
    for (std::size_t v : order) {
        family.clear();
        for (VarSet e : h.edges) {
            if (contains(e, v)) family.push_back(e & prefix);
        }
        for (std::size_t i = 0; i < family.size(); ++i) {
            for (std::size_t j = i + 1; j < family.size(); ++j) {
                const VarSet a = family[i], b = family[j];
                if ((a & ~b) != 0 && (b & ~a) != 0) return false;
            }
        }
        prefix |= bit(v);
    }
    return true;
}

std::size_t gao_run_length(const Hypergraph& h, const std::vector<std::size_t>& order) {
    if (order.empty()) return 0;
    std::size_t best = 1, run = 1;
    for (std::size_t i = 1; i < order.size(); ++i) {
        const VarSet pair = bit(order[i - 1]) | bit(order[i]);
        const bool linked = std::any_of(h.edges.begin(), h.edges.end(),
                                        [&](VarSet e) { return (pair & ~e) == 0; });
        run = linked ? run + 1 : 1;
        best = std::max(best, run);
    }
    return best;
}

Gao select_gao(const Query& q) {
    const Hypergraph h = Hypergraph::of(q);
    const std::size_t n = q.var_count();
    const bool acyclic = is_beta_acyclic(h);

    // Enumerate permutations in lexicographic order of variable names so
    // that the first best-scoring one wins ties.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return q.var_names()[a] < q.var_names()[b]; });
    auto by_name = [&](std::size_t a, std::size_t b) { return q.var_names()[a] < q.var_names()[b]; };

    if (n > 10) {
        Gao g{perm, is_neo(h, perm)};
        return g;
    }

    Gao best;
    std::size_t best_score = 0;
    bool found = false;
    do {
        const bool neo = is_neo(h, perm);
        if (acyclic && !neo) continue;
        const std::size_t score = gao_run_length(h, perm);
        if (!found || score > best_score) {
            best = Gao{perm, neo};
            best_score = score;
            found = true;
        }
    } while (std::next_permutation(perm.begin(), perm.end(), by_name));
    return best;
}

Gao make_gao(const Query& q, const std::vector<std::string>& names) {
    if (names.size() != q.var_count()) {
        throw ConfigError("GAO must list every query variable exactly once");
    }
    Gao g;
    std::vector<bool> used(q.var_count(), false);
    for (const auto& name : names) {
        auto v = q.var_index(name);
        if (!v) throw ConfigError("GAO names unknown variable '" + name + "'");
        if (used[*v]) throw ConfigError("GAO repeats variable '" + name + "'");
        used[*v] = true;
        g.order.push_back(*v);
    }
    g.is_neo = is_neo(Hypergraph::of(q), g.order);
    return g;
}

std::vector<std::size_t> beta_acyclic_skeleton(const Query& q, const Gao& gao) {
    const Hypergraph h = Hypergraph::of(q);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < h.edges.size(); ++i) {
        kept.push_back(i);
        const Hypergraph sub = h.subset(kept);
        if (!is_beta_acyclic(sub) || !is_neo(sub, gao.order)) kept.pop_back();
    }
    return kept;
}

}  // namespace wcoj
