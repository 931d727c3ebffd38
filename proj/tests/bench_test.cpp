#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "test_util.hpp"
#include "wcoj/error.hpp"
#include "wcoj/lftj.hpp"
#include "wcoj/oracle.hpp"

namespace wcoj {
namespace {

using testing::complete_graph;

TEST(Sampling, SelectivityOneKeepsEveryNode) {
    const Graph g = complete_graph(50);
    EXPECT_EQ(sample_nodes(g, 1, 3, 1).size(), 50U);
}

TEST(Sampling, SizeConcentratesAroundTheMean) {
    const Graph g = make_graph(10000, {}, true);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto n = sample_nodes(g, 10, seed, 1).size();
        EXPECT_GE(n, 800U) << "seed " << seed;
        EXPECT_LE(n, 1200U) << "seed " << seed;
    }
}

TEST(Sampling, Deterministic) {
    const Graph g = erdos_renyi(500, 0.01, 2);
    EXPECT_EQ(sample_nodes(g, 8, 7, 1), sample_nodes(g, 8, 7, 1));
    EXPECT_NE(sample_nodes(g, 8, 7, 1), sample_nodes(g, 8, 7, 2));
    EXPECT_NE(sample_nodes(g, 8, 7, 1), sample_nodes(g, 8, 8, 1));
}

TEST(Sampling, SeesOriginalNodeIds) {
    // The same original nodes are picked however the ids are densified.
    const Graph a = parse_edge_list("10 20\n20 30\n30 40\n", true);
    const Graph b = parse_edge_list("20 30\n30 40\n40 10\n1000 10\n", true);
    auto originals = [](const Graph& g, const Relation& r) {
        std::set<std::int64_t> out;
        for (std::size_t i = 0; i < r.size(); ++i) out.insert(g.nodes.original(r.row(i)[0]));
        out.erase(1000);
        return out;
    };
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EXPECT_EQ(originals(a, sample_nodes(a, 2, seed, 1)), originals(b, sample_nodes(b, 2, seed, 1)));
    }
}

TEST(ErdosRenyi, DeterministicAndUndirected) {
    const Graph g = erdos_renyi(60, 0.1, 4);
    EXPECT_EQ(g.edges, erdos_renyi(60, 0.1, 4).edges);
    EXPECT_EQ(g.node_count(), 60U);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto r = g.edges.row(i);
        EXPECT_TRUE(g.edges.contains(Tuple{r[1], r[0]}));
    }
    const double pairs = 60.0 * 59 / 2;
    EXPECT_NEAR(static_cast<double>(g.edges.size()) / 2 / pairs, 0.1, 0.03);
}

TEST(Partition, EqualSplit) {
    std::vector<Value> domain(100);
    std::iota(domain.begin(), domain.end(), 0);
    const auto jobs = partition_jobs(domain, 4);
    EXPECT_EQ(jobs, (std::vector<Job>{{0, 24}, {25, 49}, {50, 74}, {75, 99}}));
}

TEST(Partition, DefaultGranularityForCyclicQueries) {
    std::vector<Value> domain(1000);
    std::iota(domain.begin(), domain.end(), 0);
    const auto jobs = partition_jobs(domain, 2 * 8);
    ASSERT_EQ(jobs.size(), 16U);
    for (const auto& [lo, hi] : jobs) {
        const auto size = hi - lo + 1;
        EXPECT_TRUE(size == 62 || size == 63);
    }
}

TEST(Partition, MorePartsThanValues) {
    const auto jobs = partition_jobs({3, 8, 20}, 8);
    ASSERT_EQ(jobs.size(), 8U);
    EXPECT_EQ(jobs[0], Job(3, 3));
    EXPECT_EQ(jobs[1], Job(8, 8));
    EXPECT_EQ(jobs[2], Job(20, 20));
    for (std::size_t i = 3; i < 8; ++i) EXPECT_GT(jobs[i].first, jobs[i].second);
}

TEST(Partition, JobsCoverTheDomainOnce) {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 100; ++round) {
        std::vector<Value> domain;
        for (Value v = 0; v < 200; ++v)
            if (rng() % 3 == 0) domain.push_back(v);
        const std::size_t parts = 1 + rng() % 40;
        const auto jobs = partition_jobs(domain, parts);
        ASSERT_EQ(jobs.size(), parts);
        std::size_t covered = 0, smallest = domain.size(), largest = 0;
        for (const auto& [lo, hi] : jobs) {
            std::size_t k = 0;
            for (Value v : domain) k += (lo <= v && v <= hi);
            covered += k;
            smallest = std::min(smallest, k);
            largest = std::max(largest, k);
        }
        EXPECT_EQ(covered, domain.size());
        EXPECT_LE(largest - smallest, 1U);
    }
}

TEST(Execute, ThreadsAndGranularityDoNotChangeCounts) {
    const Graph g = erdos_renyi(60, 0.1, 5);
    for (const auto& e : query_catalog()) {
        const Query q = parse_query(e.text);
        const auto db = make_database(g, q, 2, 5);
        const auto pq = testing::prepare(q, db);
        const auto expect = execute(pq, EngineKind::Lftj, {}, false, 1, 1);
        for (EngineKind engine : {EngineKind::Lftj, EngineKind::Ms}) {
            for (unsigned threads : {1U, 2U, 4U}) {
                for (unsigned f : {1U, 8U}) {
                    EXPECT_EQ(execute(pq, engine, {}, false, threads, threads * f), expect)
                        << e.name << ' ' << engine_name(engine) << " threads " << threads << " f " << f;
                }
            }
        }
    }
}

TEST(Execute, OracleIsNotPartitioned) {
    const auto db = testing::graph_db(complete_graph(4));
    const auto pq = testing::prepare(catalog_query("3-clique"), db);
    EXPECT_THROW(execute(pq, EngineKind::Oracle, {}, false, 1, 1), ConfigError);
}

TEST(Benchmark, CountsAndRepetitions) {
    RunSpec spec;
    spec.dataset = "er:n=60,p=0.1,seed=1";
    spec.query = "3-clique";
    spec.repetitions = 3;
    const auto r = run_benchmark(spec);
    EXPECT_EQ(r.durations.size(), 3U);
    EXPECT_DOUBLE_EQ(r.duration_s, (r.durations[1] + r.durations[2]) / 2);
    EXPECT_FALSE(r.timed_out);
    EXPECT_EQ(r.granularity, 8U);
    const auto db = testing::graph_db(load_dataset(spec.dataset));
    EXPECT_EQ(r.count, oracle_join(catalog_query("3-clique"), db, nullptr).count);
}

TEST(Benchmark, TimeoutInterruptsPromptly) {
    const Graph g = complete_graph(400);
    RunSpec spec;
    spec.dataset = "k400";
    spec.query = "edge(a,b), edge(b,c), edge(c,d), edge(d,e).";
    spec.timeout_s = 0.3;
    spec.repetitions = 1;
    for (EngineKind e : {EngineKind::Lftj, EngineKind::Ms, EngineKind::Oracle}) {
        spec.engine = e;
        const auto start = std::chrono::steady_clock::now();
        const auto r = run_benchmark(spec, g);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        EXPECT_TRUE(r.timed_out) << engine_name(e);
        EXPECT_LT(r.durations.back(), 2 * spec.timeout_s) << engine_name(e);
        EXPECT_LT(wall, 5.0) << engine_name(e);
    }
}

TEST(Benchmark, InvalidSpecs) {
    RunSpec spec;
    spec.dataset = "er:n=10,p=0.5,seed=1";
    spec.query = "3-clique";
    spec.threads = 0;
    EXPECT_THROW(run_benchmark(spec), ConfigError);
    spec.threads = 1;
    spec.selectivity = 0.5;
    EXPECT_THROW(run_benchmark(spec), ConfigError);
    spec.selectivity = 2;
    spec.query = "5-clique";
    EXPECT_THROW(run_benchmark(spec), ConfigError);
    EXPECT_THROW(parse_engine("postgres"), ConfigError);
}

// Drops the duration_s column, the second from the right.
std::string strip_duration(std::string row) {
    const auto last = row.rfind(',');
    const auto before = row.rfind(',', last - 1);
    return row.erase(before + 1, last - before - 1);
}

TEST(Csv, RowsAreDeterministicApartFromTiming) {
    RunSpec spec;
    spec.dataset = "er:n=60,p=0.1,seed=2";
    spec.query = "2-comb";
    spec.engine = EngineKind::Ms;
    spec.repetitions = 2;
    std::ostringstream a, b, header;
    write_csv_row(a, spec, run_benchmark(spec));
    write_csv_row(b, spec, run_benchmark(spec));
    EXPECT_EQ(strip_duration(a.str()), strip_duration(b.str()));
    write_csv_header(header);
    EXPECT_EQ(header.str(), "dataset,query,engine,selectivity,seed,threads,granularity,count,duration_s,timed_out\n");
    EXPECT_EQ(a.str().rfind("\"er:n=60,p=0.1,seed=2\",2-comb,ms,10,1,1,1,181,", 0), 0U) << a.str();
}

TEST(Verify, AllEnginesAgreeOnTwoComb) {
    RunSpec spec;
    spec.query = "2-comb";
    const auto report = verify(spec, erdos_renyi(60, 0.1, 3));
    EXPECT_TRUE(report.ok) << report.message;
    ASSERT_EQ(report.rows.size(), 4U);
    EXPECT_FALSE(report.rows[2].ran);  // hybrid needs a cyclic query
    EXPECT_TRUE(report.rows[3].ran);
}

TEST(Verify, HybridRunsOnLollipops) {
    RunSpec spec;
    spec.query = "2-lollipop";
    spec.selectivity = 2;
    const auto report = verify(spec, erdos_renyi(60, 0.1, 3));
    EXPECT_TRUE(report.ok) << report.message;
    EXPECT_TRUE(report.rows[2].ran);
}

TEST(Verify, TamperedRowIsReported) {
    RunSpec spec;
    spec.query = "3-path";
    spec.selectivity = 2;
    auto report = verify(spec, erdos_renyi(60, 0.1, 4));
    ASSERT_TRUE(report.ok);
    report.rows[1].count += 1;
    check_agreement(report);
    EXPECT_FALSE(report.ok);
    EXPECT_NE(report.message.find("ms="), std::string::npos);
}

TEST(Datasets, ResolvesKnownNamesInTheDataDirectory) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "wcoj_bench_test_data";
    fs::create_directories(dir);
    {
        std::ofstream(dir / "ca-GrQc.txt") << "# tiny\n1 2\n2 3\n3 1\n";
        std::ofstream(dir / "custom.txt") << "5 6\n";
    }
    ::setenv("WCOJ_DATA_DIR", dir.c_str(), 1);
    EXPECT_EQ(resolve_dataset("ca-GrQc"), dir / "ca-GrQc.txt");
    EXPECT_EQ(resolve_dataset("custom"), dir / "custom.txt");
    EXPECT_FALSE(resolve_dataset("wiki-Vote").has_value());
    EXPECT_THROW(load_dataset("wiki-Vote"), ConfigError);
    const Graph g = load_dataset("ca-GrQc");
    EXPECT_EQ(g.edges.size(), 6U);
    EXPECT_EQ(lftj_count(testing::prepare(catalog_query("3-clique"), testing::graph_db(g)), {}), 1U);
    ::unsetenv("WCOJ_DATA_DIR");
    fs::remove_all(dir);
}

TEST(Datasets, ClassesAndSelectivities) {
    ASSERT_NE(find_known_dataset("wiki-Vote"), nullptr);
    EXPECT_EQ(find_known_dataset("wiki-Vote")->triangles, 608389U);
    EXPECT_EQ(find_known_dataset("soc-Epinions1")->cls, DatasetClass::Large);
    EXPECT_EQ(default_selectivities(DatasetClass::Small), (std::vector<double>{8, 80}));
    EXPECT_EQ(default_selectivities(DatasetClass::Large), (std::vector<double>{10, 100, 1000}));
    EXPECT_EQ(find_known_dataset("nope"), nullptr);
}

TEST(Datasets, GeneratorSpecs) {
    EXPECT_EQ(load_dataset("er:n=30,p=0.2,seed=9").edges, erdos_renyi(30, 0.2, 9).edges);
    EXPECT_THROW(load_dataset("er:n=30,p=2"), ConfigError);
    EXPECT_THROW(load_dataset("er:n=x"), ConfigError);
    EXPECT_THROW(load_dataset("er:bogus"), ConfigError);
}

}  // namespace
}  // namespace wcoj
