#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "test_util.hpp"
#include "wcoj/error.hpp"
#include "wcoj/lftj.hpp"
#include "wcoj/minesweeper.hpp"
#include "wcoj/oracle.hpp"

namespace wcoj {
namespace {

constexpr Value W = kWildcard;

using testing::Collector;
using testing::complete_graph;
using testing::graph_db;
using testing::path_graph;
using testing::prepare;
using testing::unary;

std::uint64_t oracle_count(const Query& q, const Database& db) {
    const auto r = oracle_join(q, db, nullptr);
    EXPECT_FALSE(r.too_slow);
    return r.count;
}

EngineConfig toggles(unsigned mask) {
    EngineConfig cfg;
    cfg.idea3 = (mask & 1U) != 0;
    cfg.idea5 = (mask & 2U) != 0;
    cfg.idea6 = (mask & 4U) != 0;
    return cfg;
}

TEST(Minesweeper, PathQueryOnPathGraph) {
    const auto db = graph_db(path_graph(6), {unary("v1", {0}), unary("v2", {3})});
    const auto pq = prepare(catalog_query("3-path"), db);
    Collector c;
    EXPECT_EQ(ms_enumerate(pq, {}, c.sink()), 1U);
    ASSERT_EQ(c.rows.size(), 1U);
    // variables a, d, b, c by first appearance
    EXPECT_EQ(c.rows[0], (Tuple{0, 3, 1, 2}));
}

TEST(Minesweeper, EmptyEdgeRelation) {
    const auto db = graph_db(make_graph(4, {}, true));
    for (const char* name : {"3-clique", "4-cycle"}) {
        EngineStats stats;
        EXPECT_EQ(ms_enumerate(prepare(catalog_query(name), db), {}, [](auto) {}, &stats), 0U);
        EXPECT_EQ(stats.free_tuples, 1U) << name;
    }
}

TEST(Minesweeper, NonNeoOrderOnAcyclicQueryNeedsSkeletonMode) {
    const Query q = parse_query("edge(a,b), edge(b,c), edge(c,d), edge(d,e).");
    const auto db = graph_db(path_graph(6));
    const auto pq = PreparedQuery::build(q, db, make_gao(q, {"a", "b", "d", "c", "e"}));
    ASSERT_FALSE(pq.gao.is_neo);
    EngineConfig cfg;
    cfg.idea6 = false;
    EXPECT_THROW(ms_enumerate(pq, cfg, [](auto) {}), ConfigError);
    cfg.idea6 = true;
    EXPECT_EQ(ms_enumerate(pq, cfg, [](auto) {}), lftj_count(pq, {}));
}

TEST(AdvancePast, Examples) {
    const Tuple t{3, 9, 5};
    EXPECT_EQ(advance_past(Constraint(3, {3}, 8, 12), t), (Tuple{3, 12, -1}));
    EXPECT_EQ(advance_past(Constraint(3, {3}, 8, kPosInf), t), (Tuple{4, -1, -1}));
    EXPECT_EQ(advance_past(Constraint(3, {}, 1, kPosInf), t), std::nullopt);
    EXPECT_EQ(advance_past(Constraint(3, {W}, kNegInf, kPosInf), t), std::nullopt);
}

// Smallest tuple >= t over values -1..7 that lies outside c.
std::optional<Tuple> brute_advance(const Constraint& c, Tuple t) {
    const Value top = 7;
    while (true) {
        if (!c.contains(t)) return t;
        std::size_t k = t.size();
        while (k > 0 && t[k - 1] == top) t[--k] = kFrontierStart;
        if (k == 0) return std::nullopt;
        ++t[k - 1];
    }
}

TEST(AdvancePast, MatchesBruteForce) {
    std::mt19937_64 rng(11);
    int checked = 0;
    while (checked < 3000) {
        const std::size_t n = 1 + rng() % 3;
        const std::size_t d = rng() % n;
        std::vector<Value> pattern;
        for (std::size_t i = 0; i < d; ++i)
            pattern.push_back(rng() % 2 ? W : static_cast<Value>(rng() % 6));
        Value lo = static_cast<Value>(rng() % 8) - 2;
        Value hi = lo + 2 + static_cast<Value>(rng() % 5);
        if (lo == -2) lo = kNegInf;
        if (hi > 6) hi = kPosInf;
        const Constraint c(n, pattern, lo, hi);
        Tuple t(n);
        for (auto& v : t) v = static_cast<Value>(rng() % 7) - 1;
        for (std::size_t i = 0; i < d; ++i)
            if (pattern[i] != W) t[i] = pattern[i];
        if (!c.contains(t)) continue;
        ASSERT_EQ(advance_past(c, t), brute_advance(c, t)) << c.to_string();
        ++checked;
    }
}

TEST(ProbeCache, AnswersFromTheCachedGap) {
    // R(B, C) over GAO (A, B, C): columns at depths 1 and 2.
    ProbeCache cache({1, 2});
    const Tuple t{4, 2, 5};
    EXPECT_FALSE(cache.lookup(t).has_value());
    cache.record(t, GapResult::make_gap(Constraint(3, {W, 2}, 3, 8)));
    const auto inside = cache.lookup(Tuple{9, 2, 6});
    ASSERT_TRUE(inside.has_value());
    EXPECT_FALSE(inside->member);
    const auto at_end = cache.lookup(Tuple{4, 2, 8});
    ASSERT_TRUE(at_end.has_value());
    EXPECT_TRUE(at_end->member);
    EXPECT_FALSE(cache.lookup(Tuple{4, 2, 9}).has_value());
    EXPECT_FALSE(cache.lookup(Tuple{4, 3, 6}).has_value());
}

TEST(ProbeCache, WitnessAnswersMember) {
    ProbeCache cache({0, 2});
    cache.record(Tuple{1, 7, 4}, GapResult::make_member());
    const auto r = cache.lookup(Tuple{1, 9, 4});
    ASSERT_TRUE(r.has_value());
    EXPECT_TRUE(r->member);
    EXPECT_FALSE(cache.lookup(Tuple{1, 9, 5}).has_value());
}

TEST(ProbeCache, AuditedRunsAgree) {
    const Graph g = erdos_renyi(40, 0.15, 2);
    for (const char* name : {"3-clique", "4-cycle", "3-path", "2-tree"}) {
        const Query q = catalog_query(name);
        const auto db = make_database(g, q, 2, 2);
        const auto pq = prepare(q, db);
        EngineConfig cfg;
        cfg.audit_probe_cache = true;
        EngineStats stats;
        EXPECT_EQ(ms_enumerate(pq, cfg, [](auto) {}, &stats), lftj_count(pq, {})) << name;
        EXPECT_GT(stats.probes_skipped, 0U) << name;
        EXPECT_GT(stats.audited, 0U) << name;
    }
}

TEST(Minesweeper, SkeletonGapsOnlyInCyclicQueries) {
    const Graph g = erdos_renyi(30, 0.2, 4);
    for (const char* name : {"3-clique", "4-cycle", "4-clique", "2-lollipop", "3-lollipop"}) {
        const Query q = catalog_query(name);
        const auto db = make_database(g, q, 2, 4);
        EngineStats stats;
        ms_enumerate(prepare(q, db), {}, [](auto) {}, &stats);
        EXPECT_NE(stats.skeleton_atoms, (std::uint64_t{1} << q.atoms().size()) - 1) << name;
        EXPECT_NE(stats.inserted_sources, 0U) << name;
        EXPECT_EQ(stats.inserted_sources & ~stats.skeleton_atoms, 0U) << name;
    }
}

TEST(Minesweeper, ToggleCombinationsMatchLftj) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Graph g = erdos_renyi(30, 0.15, seed);
        for (const auto& e : query_catalog()) {
            const Query q = parse_query(e.text);
            const auto db = make_database(g, q, 2, seed);
            const auto pq = prepare(q, db);
            const auto expect = lftj_count(pq, {});
            for (unsigned mask = 0; mask < 8; ++mask) {
                ASSERT_EQ(ms_enumerate(pq, toggles(mask), [](auto) {}), expect)
                    << e.name << " seed " << seed << " toggles " << mask;
            }
        }
    }
}

TEST(Minesweeper, OutputSequenceIndependentOfCompleteNodes) {
    const Graph g = erdos_renyi(30, 0.2, 8);
    for (const char* name : {"3-path", "1-tree", "2-comb", "3-clique", "4-cycle"}) {
        const Query q = catalog_query(name);
        const auto db = make_database(g, q, 2, 8);
        const auto pq = prepare(q, db);
        Collector on, off;
        ms_enumerate(pq, toggles(7), on.sink());
        ms_enumerate(pq, toggles(5), off.sink());
        EXPECT_EQ(on.rows, off.rows) << name;
        Collector lf;
        lftj_enumerate(pq, {}, lf.sink());
        EXPECT_EQ(on.rows, lf.rows) << name;
    }
}

// R1(A,B), R2(A,C), R3(B,D), R4(C), R5(D): for each a the output block is
// |sigma_{A=a} R1 join R3 join R5| times |pi_C sigma_{A=a} R2 join R4|.
TEST(CountingMinesweeper, FactorisedBlocks) {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 20; ++round) {
        auto pairs = [&](int k) {
            std::vector<Tuple> rows;
            for (int i = 0; i < k; ++i) rows.push_back({static_cast<Value>(rng() % 6), static_cast<Value>(rng() % 6)});
            return rows;
        };
        auto singles = [&](int k) {
            std::vector<Value> v;
            for (int i = 0; i < k; ++i) v.push_back(static_cast<Value>(rng() % 6));
            return v;
        };
        const auto r1 = pairs(14), r2 = pairs(14), r3 = pairs(14);
        const auto r4 = singles(4), r5 = singles(4);
        Database db;
        db.add(Relation("R1", {"x", "y"}, r1));
        db.add(Relation("R2", {"x", "y"}, r2));
        db.add(Relation("R3", {"x", "y"}, r3));
        db.add(unary("R4", r4));
        db.add(unary("R5", r5));

        const std::set<Value> s4(r4.begin(), r4.end()), s5(r5.begin(), r5.end());
        const std::set<Tuple> s1(r1.begin(), r1.end()), s2(r2.begin(), r2.end()), s3(r3.begin(), r3.end());
        std::uint64_t expect = 0;
        for (Value a = 0; a < 6; ++a) {
            std::uint64_t left = 0, right = 0;
            for (const auto& ab : s1) {
                if (ab[0] != a) continue;
                for (const auto& bd : s3)
                    if (bd[0] == ab[1] && s5.count(bd[1])) ++left;
            }
            for (const auto& ac : s2)
                if (ac[0] == a && s4.count(ac[1])) ++right;
            expect += left * right;
        }

        const Query q = parse_query("R1(A,B), R2(A,C), R3(B,D), R4(C), R5(D).");
        const auto pq = PreparedQuery::build(q, db, make_gao(q, {"A", "B", "C", "D"}));
        ASSERT_TRUE(pq.gao.is_neo);
        ASSERT_TRUE(ms_count_fast_path(pq));
        EXPECT_EQ(ms_count(pq, {}), expect) << "round " << round;
        EXPECT_EQ(oracle_count(q, db), expect);
    }
}

TEST(CountingMinesweeper, ReusesFinishedSubsearches) {
    const Graph g = erdos_renyi(50, 0.2, 1);
    const Query q = catalog_query("2-comb");
    const auto db = make_database(g, q, 2, 1);
    const auto pq = prepare(q, db);
    EngineStats stats;
    EXPECT_EQ(ms_count(pq, {}, &stats), oracle_count(q, db));
    EXPECT_GT(stats.memo_hits, 0U);
}

TEST(CountingMinesweeper, OneTreeMatchesOracle) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = erdos_renyi(50, 0.1, seed);
        const Query q = catalog_query("1-tree");
        const auto db = make_database(g, q, 3, seed);
        const auto pq = prepare(q, db);
        ASSERT_TRUE(ms_count_fast_path(pq));
        EXPECT_EQ(ms_count(pq, {}), oracle_count(q, db)) << "seed " << seed;
    }
}

TEST(CountingMinesweeper, EmptySample) {
    const Query q = catalog_query("1-tree");
    const auto db = graph_db(complete_graph(6), {unary("v1", {}), unary("v2", {1, 2})});
    EXPECT_EQ(ms_count(prepare(q, db), {}), 0U);
}

TEST(CountingMinesweeper, FallbackForFiltersAndCycles) {
    const Graph g = erdos_renyi(30, 0.2, 6);
    for (const char* name : {"3-clique", "4-cycle", "2-lollipop"}) {
        const Query q = catalog_query(name);
        const auto db = make_database(g, q, 2, 6);
        const auto pq = prepare(q, db);
        EXPECT_FALSE(ms_count_fast_path(pq));
        EXPECT_EQ(ms_count(pq, {}), lftj_count(pq, {})) << name;
    }
}

TEST(Hybrid, LollipopMatchesOracle) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = erdos_renyi(40, 0.15, seed);
        const Query q = catalog_query("2-lollipop");
        const auto db = make_database(g, q, 2, seed);
        const auto pq = prepare(q, db);
        const auto split = default_hybrid_split(pq);
        ASSERT_GE(split, 2U);
        ASSERT_LT(split, pq.arity());
        EXPECT_EQ(hybrid_join(pq, split, {}, nullptr), oracle_count(q, db)) << "seed " << seed;
    }
}

TEST(Hybrid, OutputSetEqualsLftj) {
    const Graph g = erdos_renyi(30, 0.25, 3);
    for (const char* name : {"2-lollipop", "3-lollipop"}) {
        const Query q = catalog_query(name);
        const auto db = make_database(g, q, 2, 3);
        const auto pq = prepare(q, db);
        Collector h, l;
        const Sink hs = h.sink();
        hybrid_join(pq, default_hybrid_split(pq), {}, &hs);
        lftj_enumerate(pq, {}, l.sink());
        std::sort(h.rows.begin(), h.rows.end());
        std::sort(l.rows.begin(), l.rows.end());
        EXPECT_EQ(h.rows, l.rows) << name;
    }
}

TEST(Hybrid, FullSplitIsPlainMinesweeper) {
    const Graph g = erdos_renyi(30, 0.2, 9);
    const Query q = catalog_query("3-path");
    const auto db = make_database(g, q, 2, 9);
    const auto pq = prepare(q, db);
    Collector h, m;
    const Sink hs = h.sink();
    hybrid_join(pq, pq.arity(), {}, &hs);
    ms_enumerate(pq, {}, m.sink());
    EXPECT_EQ(h.rows, m.rows);
}

TEST(Hybrid, InvalidSplit) {
    const auto db = graph_db(complete_graph(5));
    const auto pq = prepare(catalog_query("3-clique"), db);
    EXPECT_THROW(hybrid_join(pq, pq.arity() + 1, {}, nullptr), ConfigError);
    EXPECT_THROW(hybrid_join(pq, 0, {}, nullptr), ConfigError);
}

}  // namespace
}  // namespace wcoj
