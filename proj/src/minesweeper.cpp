#include "wcoj/minesweeper.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "wcoj/cds.hpp"
#include "wcoj/error.hpp"
#include "wcoj/hypergraph.hpp"
#include "wcoj/lftj.hpp"

namespace wcoj {

ProbeCache::ProbeCache(std::vector<std::size_t> column_depth) : depth_(std::move(column_depth)) {}

std::optional<GapResult> ProbeCache::lookup(std::span<const Value> t) const {
    const std::size_t k = depth_.size();
    if (has_witness_) {
        bool same = true;
        for (std::size_t c = 0; c < k && same; ++c) same = t[depth_[c]] == witness_[c];
        if (same) return GapResult::make_member();
    }
    if (gap_) {
        for (std::size_t c = 0; c < gap_col_; ++c) {
            if (t[depth_[c]] != gap_->pattern()[depth_[c]]) return std::nullopt;
        }
        const Value v = t[depth_[gap_col_]];
        if (gap_->lo() < v && v < gap_->hi()) return GapResult::make_gap(*gap_);
        // The endpoints of a gap are stored values; on the last column they
        // complete a stored tuple.
        if (gap_col_ + 1 == k && (v == gap_->lo() || v == gap_->hi()) && !is_infinite(v)) {
            return GapResult::make_member();
        }
    }
    return std::nullopt;
}

void ProbeCache::record(std::span<const Value> t, const GapResult& r) {
    if (r.member) {
        witness_.resize(depth_.size());
        for (std::size_t c = 0; c < depth_.size(); ++c) witness_[c] = t[depth_[c]];
        has_witness_ = true;
        return;
    }
    gap_ = r.gap;
    const std::size_t d = gap_->interval_depth();
    gap_col_ = static_cast<std::size_t>(std::find(depth_.begin(), depth_.end(), d) - depth_.begin());
}

std::optional<Tuple> advance_past(const Constraint& c, std::span<const Value> t) {
    const std::size_t d = c.interval_depth();
    Tuple out(t.begin(), t.end());
    if (c.hi() < kPosInf) {
        out[d] = c.hi();
        std::fill(out.begin() + static_cast<std::ptrdiff_t>(d) + 1, out.end(), kFrontierStart);
        return out;
    }
    if (d == 0) return std::nullopt;
    std::size_t k = d - 1;
    if (c.lo() < kFrontierStart) {
        // The whole slice at depth d is covered, so wildcard positions
        // cannot escape the box; only an equality position can.
        while (c.pattern()[k] == kWildcard) {
            if (k == 0) return std::nullopt;
            --k;
        }
    }
    ++out[k];
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(k) + 1, out.end(), kFrontierStart);
    return out;
}

namespace {

std::vector<std::size_t> identity(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

/// Hypergraph over GAO positions [0, n) of the atoms' projections.
Hypergraph prefix_hypergraph(const PreparedQuery& pq, std::size_t n, std::vector<std::size_t>* atom_ids) {
    Hypergraph h;
    h.vertex_count = n;
    for (std::size_t a = 0; a < pq.atoms.size(); ++a) {
        VarSet e = 0;
        for (std::size_t d : pq.atoms[a].column_depth) {
            if (d < n) e |= bit(d);
        }
        if (e == 0) continue;
        h.edges.push_back(e);
        if (atom_ids) atom_ids->push_back(a);
    }
    return h;
}

bool prefix_is_neo_acyclic(const PreparedQuery& pq, std::size_t n) {
    const Hypergraph h = prefix_hypergraph(pq, n, nullptr);
    return is_beta_acyclic(h) && is_neo(h, identity(n));
}

class MinesweeperRun {
public:
    /// n = number of GAO positions handled by Minesweeper.
    MinesweeperRun(const PreparedQuery& pq, const EngineConfig& cfg, std::size_t n, bool counting,
                   EngineStats* stats)
        : pq_(pq), cfg_(cfg), n_(n), counting_(counting), stats_(stats ? stats : &local_stats_),
          tree_(n, ConstraintTree::Options{cfg.idea5, false}) {
        pq.validate();
        std::vector<std::size_t> atom_ids;
        const Hypergraph h = prefix_hypergraph(pq, n, &atom_ids);
        const bool acyclic = is_beta_acyclic(h);
        const bool neo = is_neo(h, identity(n));

        std::vector<bool> skeleton(atom_ids.size(), true);
        if (!(acyclic && neo)) {
            if (cfg.idea6) {
                std::vector<std::size_t> kept;
                for (std::size_t i = 0; i < h.edges.size(); ++i) {
                    kept.push_back(i);
                    const Hypergraph sub = h.subset(kept);
                    if (!is_beta_acyclic(sub) || !is_neo(sub, identity(n))) {
                        kept.pop_back();
                        skeleton[i] = false;
                    }
                }
            } else if (acyclic) {
                throw ConfigError("Minesweeper needs a NEO attribute order for this acyclic query "
                                  "(or skeleton mode)");
            }
        }
        chain_mode_ = acyclic && neo ? true : cfg.idea6;
        tree_ = ConstraintTree(n, ConstraintTree::Options{cfg.idea5, cfg.assert_chain && chain_mode_});

        for (std::size_t i = 0; i < atom_ids.size(); ++i) {
            const AtomIndex& ai = pq.atoms[atom_ids[i]];
            ProbeAtom pa{atom_ids[i], 0, skeleton[i], ProbeCache({})};
            std::vector<std::size_t> depths;
            for (std::size_t d : ai.column_depth) {
                if (d >= n) break;
                depths.push_back(d);
            }
            pa.columns = depths.size();
            pa.cache = ProbeCache(depths);
            if (skeleton[i]) stats_->skeleton_atoms |= std::uint64_t{1} << (atom_ids[i] % 64);
            probes_.push_back(std::move(pa));
        }
        for (auto [less, greater] : pq.position_filters()) {
            if (less < n && greater < n) filters_.emplace_back(less, greater);
        }

        if (counting_) setup_counting();

        if (cfg.first_lo > kNegInf) tree_.insert(Constraint(n, {}, kNegInf, cfg.first_lo));
        if (cfg.first_hi < kPosInf) tree_.insert(Constraint(n, {}, cfg.first_hi, kPosInf));
    }

    /// Calls on_tuple with every prefix tuple (GAO order) satisfying the
    /// probed atoms and filters. Returns the number of such tuples, or the
    /// join count in counting mode.
    template <typename F>
    std::uint64_t run(F&& on_tuple) {
        std::uint64_t emitted = 0;
        unsigned poll = 0;
        while (tree_.compute_free_tuple()) {
            if (cfg_.stop) cfg_.stop->poll(poll);
            ++stats_->free_tuples;
            const Tuple& t = tree_.frontier();

            if (counting_ && use_memo(t)) continue;

            bool gap = false;
            bool changed = false;
            bool finished = false;
            std::optional<Tuple> jump;
            for (std::size_t i = 0; i < probes_.size(); ++i) {
                const GapResult r = probe(probes_[i], t);
                if (r.member) continue;
                gap = true;
                if (probes_[i].skeleton) {
                    ++stats_->constraints_inserted;
                    stats_->inserted_sources |= std::uint64_t{1} << (probes_[i].atom % 64);
                    changed |= tree_.insert(*r.gap, static_cast<unsigned>(i));
                } else {
                    auto next = advance_past(*r.gap, t);
                    if (!next) {
                        finished = true;
                    } else if (!jump || *jump < *next) {
                        jump = std::move(next);
                    }
                }
            }
            if (finished) break;
            if (!gap) {
                if (auto next = filter_advance(t)) {
                    if (!*next) break;
                    ++stats_->frontier_jumps;
                    tree_.set_frontier(std::move(**next));
                    continue;
                }
                ++emitted;
                if (counting_) add_output();
                on_tuple(t);
                Tuple next = t;
                ++next[n_ - 1];
                tree_.set_frontier(std::move(next));
            } else if (jump) {
                ++stats_->frontier_jumps;
                tree_.set_frontier(std::move(*jump));
            } else if (!changed) {
                throw std::logic_error("Minesweeper made no progress on a free tuple");
            }
        }
        return counting_ ? sub_[0] : emitted;
    }

    const ConstraintTree& tree() const { return tree_; }

private:
    struct ProbeAtom {
        std::size_t atom;
        std::size_t columns;
        bool skeleton;
        ProbeCache cache;
    };

    GapResult probe(ProbeAtom& pa, const Tuple& t) {
        const AtomIndex& ai = pq_.atoms[pa.atom];
        if (cfg_.idea3) {
            if (auto cached = pa.cache.lookup(t)) {
                ++stats_->probes_skipped;
                if (cfg_.audit_probe_cache && (++audit_tick_ % 100) == 0) {
                    ++stats_->audited;
                    const GapResult real = seek_gap(*ai.index, t, ai.column_depth, pa.columns);
                    if (real.member != cached->member || (!real.member && !(*real.gap == *cached->gap))) {
                        throw std::logic_error("probe cache disagrees with the index for " +
                                               pq_.query.atoms()[pa.atom].relation);
                    }
                }
                return *cached;
            }
        }
        ++stats_->probes;
        GapResult r = seek_gap(*ai.index, t, ai.column_depth, pa.columns);
        if (cfg_.idea3) pa.cache.record(t, r);
        return r;
    }

    /// nullopt when t passes every filter. Otherwise the smallest tuple
    /// above t passing the violated filters, or an empty inner optional when
    /// there is none.
    std::optional<std::optional<Tuple>> filter_advance(const Tuple& t) const {
        std::optional<Tuple> best;
        bool failed = false;
        for (auto [less, greater] : filters_) {
            if (t[less] < t[greater]) continue;
            failed = true;
            Tuple cand = t;
            std::size_t reset_from;
            if (less < greater) {
                cand[greater] = t[less] + 1;
                reset_from = greater + 1;
            } else {
                // Every later value at `less` stays >= t[greater].
                if (less == 0) return std::optional<Tuple>{};
                ++cand[less - 1];
                reset_from = less;
            }
            std::fill(cand.begin() + static_cast<std::ptrdiff_t>(reset_from), cand.end(), kFrontierStart);
            if (!best || *best < cand) best = std::move(cand);
        }
        if (!failed) return std::nullopt;
        return best;
    }

    // Counting: a finished sub-search below a prefix of length d is
    // determined by the prefix values at the separator S_d (earlier
    // positions sharing an atom with a later one), so its count is stored
    // in the tree under the pattern that keeps only those values.

    void setup_counting() {
        sep_.assign(n_ + 1, 0);
        inner_atoms_.assign(n_ + 1, {});
        for (std::size_t d = 0; d <= n_; ++d) {
            const VarSet before = d >= 64 ? ~VarSet{0} : bit(d) - 1;
            for (std::size_t a = 0; a < pq_.atoms.size(); ++a) {
                VarSet e = 0;
                for (std::size_t p : pq_.atoms[a].column_depth) e |= bit(p);
                if (e & ~before) {
                    sep_[d] |= e & before;
                } else {
                    inner_atoms_[d].push_back(a);
                }
            }
        }
        sub_.assign(n_ + 1, 0);
    }

    std::vector<Value> memo_pattern(const Tuple& t, std::size_t d) const {
        std::vector<Value> pat(d, kWildcard);
        for (std::size_t p = 0; p < d; ++p) {
            if (contains(sep_[d], p)) pat[p] = t[p];
        }
        return pat;
    }

    bool inner_atoms_hold(const Tuple& t, std::size_t d) const {
        std::vector<Value> row;
        for (std::size_t a : inner_atoms_[d]) {
            const AtomIndex& ai = pq_.atoms[a];
            row.clear();
            for (std::size_t p : ai.column_depth) row.push_back(t[p]);
            if (!ai.index->contains_prefix(row)) return false;
        }
        return true;
    }

    void add_output() {
        for (std::size_t d = 0; d < n_; ++d) ++sub_[d];
    }

    /// Closes the sub-searches left behind since the previous free tuple
    /// and tries to skip the new ones with stored counts.
    bool use_memo(const Tuple& t) {
        std::size_t k = 0;
        if (have_prev_) {
            while (k < n_ && prev_[k] == t[k]) ++k;
            for (std::size_t d = n_ - 1; d > k; --d) {
                const auto pat = memo_pattern(prev_, d);
                if (!tree_.lookup_count(pat) && (sub_[d] > 0 || inner_atoms_hold(prev_, d))) {
                    tree_.store_count(pat, sub_[d]);
                }
                sub_[d] = 0;
            }
        } else {
            k = 0;
        }
        prev_ = t;
        have_prev_ = true;
        for (std::size_t d = std::max<std::size_t>(k + 1, 1); d < n_; ++d) {
            const auto pat = memo_pattern(t, d);
            const auto memo = tree_.lookup_count(pat);
            if (!memo || !inner_atoms_hold(t, d)) continue;
            ++stats_->memo_hits;
            for (std::size_t e = 0; e < d; ++e) sub_[e] += *memo;
            sub_[d] = *memo;
            Tuple next = t;
            ++next[d - 1];
            std::fill(next.begin() + static_cast<std::ptrdiff_t>(d), next.end(), kFrontierStart);
            tree_.set_frontier(std::move(next));
            return true;
        }
        return false;
    }

    const PreparedQuery& pq_;
    const EngineConfig& cfg_;
    std::size_t n_;
    bool counting_;
    EngineStats local_stats_;
    EngineStats* stats_;
    ConstraintTree tree_;
    bool chain_mode_ = true;
    std::vector<ProbeAtom> probes_;
    std::vector<std::pair<std::size_t, std::size_t>> filters_;
    std::uint64_t audit_tick_ = 0;

    std::vector<VarSet> sep_;
    std::vector<std::vector<std::size_t>> inner_atoms_;
    std::vector<std::uint64_t> sub_;
    Tuple prev_;
    bool have_prev_ = false;
};

}  // namespace

std::uint64_t ms_enumerate(const PreparedQuery& pq, const EngineConfig& cfg, const Sink& sink,
                           EngineStats* stats) {
    MinesweeperRun run(pq, cfg, pq.arity(), false, stats);
    std::vector<Value> out;
    return run.run([&](const Tuple& t) {
        pq.to_query_order(t, out);
        sink(out);
    });
}

bool ms_count_fast_path(const PreparedQuery& pq) {
    if (!pq.query.filters().empty() || !pq.gao.is_neo) return false;
    return is_beta_acyclic(Hypergraph::of(pq.query)) && is_neo(Hypergraph::of(pq.query), pq.gao.order);
}

std::uint64_t ms_count(const PreparedQuery& pq, const EngineConfig& cfg, EngineStats* stats) {
    const bool fast = ms_count_fast_path(pq);
    MinesweeperRun run(pq, cfg, pq.arity(), fast, stats);
    return run.run([](const Tuple&) {});
}

std::size_t default_hybrid_split(const PreparedQuery& pq) {
    const std::size_t n = pq.arity();
    const Hypergraph h = Hypergraph::of(pq.query);
    // GYO leaves the cyclic core; Minesweeper takes everything up to and
    // including the first core attribute.
    std::vector<VarSet> edges = h.edges;
    bool changed = true;
    while (changed) {
        changed = false;
        VarSet once = 0, twice = 0;
        for (VarSet e : edges) {
            twice |= once & e;
            once |= e;
        }
        const VarSet lonely = once & ~twice;
        if (lonely) {
            for (VarSet& e : edges) e &= ~lonely;
            changed = true;
        }
        for (std::size_t i = 0; i < edges.size(); ++i) {
            bool drop = edges[i] == 0;
            for (std::size_t j = 0; !drop && j < edges.size(); ++j) {
                if (j != i && (edges[i] & ~edges[j]) == 0 && (edges[i] != edges[j] || j < i)) drop = true;
            }
            if (drop) {
                edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    VarSet core = 0;
    for (VarSet e : edges) core |= e;
    std::size_t split = n;
    if (edges.size() > 1) {
        for (std::size_t p = 0; p < n; ++p) {
            if (contains(core, pq.gao.order[p])) {
                split = p + 1;
                break;
            }
        }
    }
    while (split > 1 && !prefix_is_neo_acyclic(pq, split)) --split;
    return split;
}

std::uint64_t hybrid_join(const PreparedQuery& pq, std::size_t split, const EngineConfig& cfg,
                          const Sink* sink, EngineStats* stats) {
    const std::size_t n = pq.arity();
    if (split == 0 || split > n) throw ConfigError("hybrid split must be in 1..n");
    if (split == n) {
        if (sink) return ms_enumerate(pq, cfg, *sink, stats);
        MinesweeperRun run(pq, cfg, n, false, stats);
        return run.run([](const Tuple&) {});
    }
    if (!prefix_is_neo_acyclic(pq, split)) {
        throw ConfigError("hybrid prefix of length " + std::to_string(split) +
                          " is not beta-acyclic with a NEO order");
    }
    MinesweeperRun prefix_run(pq, cfg, split, false, stats);
    LftjRunner suffix(pq, cfg, split);
    std::vector<Value> out;
    LftjRunner::TupleFn emit = [&](std::span<const Value> t) {
        pq.to_query_order(t, out);
        (*sink)(out);
    };
    std::uint64_t total = 0;
    prefix_run.run([&](const Tuple& prefix) { total += suffix.run(prefix, sink ? &emit : nullptr); });
    return total;
}

}  // namespace wcoj
