#include "wcoj/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "wcoj/catalog.hpp"
#include "wcoj/error.hpp"
#include "wcoj/gao.hpp"
#include "wcoj/hypergraph.hpp"
#include "wcoj/lftj.hpp"
#include "wcoj/minesweeper.hpp"
#include "wcoj/oracle.hpp"

namespace wcoj {

std::string_view engine_name(EngineKind e) {
    switch (e) {
        case EngineKind::Lftj: return "lftj";
        case EngineKind::Ms: return "ms";
        case EngineKind::Hybrid: return "hybrid";
        case EngineKind::Oracle: return "oracle";
    }
    return "?";
}

EngineKind parse_engine(std::string_view name) {
    for (EngineKind e : {EngineKind::Lftj, EngineKind::Ms, EngineKind::Hybrid, EngineKind::Oracle}) {
        if (engine_name(e) == name) return e;
    }
    throw ConfigError("unknown engine '" + std::string(name) + "' (lftj, ms, hybrid, oracle)");
}

void RunSpec::validate() const {
    if (!(selectivity >= 1)) throw ConfigError("selectivity must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (!(timeout_s > 0)) throw ConfigError("timeout must be > 0");
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
}

std::vector<Job> partition_jobs(const std::vector<Value>& domain, std::size_t parts) {
    if (parts == 0) throw ConfigError("at least one job is needed");
    std::vector<Job> jobs;
    const std::size_t base = domain.size() / parts;
    const std::size_t extra = domain.size() % parts;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < parts; ++i) {
        const std::size_t len = base + (i < extra ? 1 : 0);
        if (len == 0) {
            jobs.emplace_back(1, 0);
        } else {
            jobs.emplace_back(domain[pos], domain[pos + len - 1]);
        }
        pos += len;
    }
    return jobs;
}

std::vector<Value> first_attribute_domain(const PreparedQuery& pq) {
    std::optional<std::vector<Value>> acc;
    for (const auto& a : pq.atoms) {
        if (a.column_depth.empty() || a.column_depth[0] != 0) continue;
        std::vector<Value> vals;
        const TrieIndex& idx = *a.index;
        for (std::size_t r = 0; r < idx.size(); ++r) {
            const Value v = idx.at(r, 0);
            if (vals.empty() || vals.back() != v) vals.push_back(v);
        }
        if (!acc) {
            acc = std::move(vals);
        } else {
            std::vector<Value> both;
            std::set_intersection(acc->begin(), acc->end(), vals.begin(), vals.end(), std::back_inserter(both));
            acc = std::move(both);
        }
    }
    return acc ? *acc : std::vector<Value>{};
}

Query resolve_query(std::string_view name_or_text) {
    if (name_or_text.find('(') != std::string_view::npos) return parse_query(name_or_text);
    return catalog_query(name_or_text);
}

bool query_is_cyclic(const Query& q) { return !is_beta_acyclic(Hypergraph::of(q)); }

bool hybrid_applicable(const PreparedQuery& pq) {
    if (!query_is_cyclic(pq.query)) return false;
    const std::size_t split = default_hybrid_split(pq);
    return split >= 2 && split < pq.arity();
}

namespace {

std::uint64_t run_engine(const PreparedQuery& pq, EngineKind engine, const EngineConfig& cfg, bool enumerate) {
    std::uint64_t seen = 0;
    const Sink sink = [&seen](std::span<const Value>) { ++seen; };
    switch (engine) {
        case EngineKind::Lftj:
            return enumerate ? lftj_enumerate(pq, cfg, sink) : lftj_count(pq, cfg);
        case EngineKind::Ms:
            return enumerate ? ms_enumerate(pq, cfg, sink) : ms_count(pq, cfg);
        case EngineKind::Hybrid: {
            const std::size_t split = cfg.hybrid_split.value_or(default_hybrid_split(pq));
            return hybrid_join(pq, split, cfg, enumerate ? &sink : nullptr);
        }
        case EngineKind::Oracle:
            break;
    }
    throw ConfigError("the oracle does not run on partitioned jobs");
}

}  // namespace

std::uint64_t execute(const PreparedQuery& pq, EngineKind engine, const EngineConfig& cfg, bool enumerate,
                      unsigned threads, std::size_t parts) {
    const std::vector<Job> jobs = partition_jobs(first_attribute_domain(pq), std::max<std::size_t>(parts, 1));
    std::atomic<std::size_t> next{0};
    std::atomic<std::uint64_t> total{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&] {
        try {
            for (std::size_t j = next.fetch_add(1); j < jobs.size(); j = next.fetch_add(1)) {
                const auto [lo, hi] = jobs[j];
                if (lo > hi) continue;
                EngineConfig job_cfg = cfg;
                job_cfg.first_lo = std::max(cfg.first_lo, lo);
                job_cfg.first_hi = std::min(cfg.first_hi, hi);
                total += run_engine(pq, engine, job_cfg, enumerate);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            if (cfg.stop) cfg.stop->request_stop();
            next = jobs.size();
        }
    };
    const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return total;
}

RunResult run_benchmark(const RunSpec& spec) { return run_benchmark(spec, load_dataset(spec.dataset)); }

RunResult run_benchmark(const RunSpec& spec, const Graph& g) {
    spec.validate();
    const Query q = resolve_query(spec.query);
    const Database db = make_database(g, q, spec.selectivity, spec.seed);
    const PreparedQuery pq = PreparedQuery::build(q, db, select_gao(q));
    RunResult result;
    result.granularity = spec.granularity ? spec.granularity : (query_is_cyclic(q) ? 8 : 1);

    EngineConfig cfg;
    cfg.idea3 = spec.idea3;
    cfg.idea5 = spec.idea5;
    cfg.idea6 = spec.idea6;
    for (unsigned rep = 0; rep < spec.repetitions; ++rep) {
        const StopToken stop = StopToken::with_timeout(std::chrono::duration<double>(spec.timeout_s));
        cfg.stop = &stop;
        const auto start = std::chrono::steady_clock::now();
        try {
            if (spec.engine == EngineKind::Oracle) {
                std::uint64_t seen = 0;
                const Sink sink = [&seen](std::span<const Value>) { ++seen; };
                result.count = oracle_join(q, db, spec.enumerate ? &sink : nullptr, ~std::uint64_t{0}, &stop).count;
            } else {
                result.count = execute(pq, spec.engine, cfg, spec.enumerate, spec.threads,
                                       static_cast<std::size_t>(spec.threads) * result.granularity);
            }
        } catch (const Interrupted&) {
            result.timed_out = true;
        }
        result.durations.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        if (result.timed_out) break;
    }
    const auto& d = result.durations;
    result.duration_s = d.size() >= 2 ? (d[d.size() - 1] + d[d.size() - 2]) / 2 : d.back();
    if (result.timed_out) result.count = 0;
    return result;
}

void check_agreement(VerifyReport& report) {
    report.ok = true;
    report.message.clear();
    const VerifyRow* first = nullptr;
    for (const auto& row : report.rows) {
        if (!row.ran) continue;
        if (!first) {
            first = &row;
        } else if (row.count != first->count) {
            report.ok = false;
            report.message = std::string(engine_name(first->engine)) + "=" + std::to_string(first->count) + " vs " +
                             std::string(engine_name(row.engine)) + "=" + std::to_string(row.count);
            return;
        }
    }
}

VerifyReport verify(const RunSpec& spec, const Graph& g) {
    spec.validate();
    const Query q = resolve_query(spec.query);
    const Database db = make_database(g, q, spec.selectivity, spec.seed);
    const PreparedQuery pq = PreparedQuery::build(q, db, select_gao(q));
    EngineConfig cfg;
    cfg.idea3 = spec.idea3;
    cfg.idea5 = spec.idea5;
    cfg.idea6 = spec.idea6;
    const std::size_t parts = static_cast<std::size_t>(spec.threads) *
                              (spec.granularity ? spec.granularity : (query_is_cyclic(q) ? 8 : 1));
    VerifyReport report;
    for (EngineKind e : {EngineKind::Lftj, EngineKind::Ms, EngineKind::Hybrid}) {
        VerifyRow row{e, 0, false, {}};
        if (e == EngineKind::Hybrid && !hybrid_applicable(pq)) {
            row.note = "not applicable";
        } else {
            const StopToken stop = StopToken::with_timeout(std::chrono::duration<double>(spec.timeout_s));
            cfg.stop = &stop;
            try {
                row.count = execute(pq, e, cfg, spec.enumerate, spec.threads, parts);
                row.ran = true;
            } catch (const Interrupted&) {
                row.note = "timed out";
            }
        }
        report.rows.push_back(row);
    }
    VerifyRow oracle{EngineKind::Oracle, 0, false, {}};
    const StopToken stop = StopToken::with_timeout(std::chrono::duration<double>(spec.timeout_s));
    try {
        const OracleResult r = oracle_join(q, db, nullptr, kDefaultOracleBudget, &stop);
        if (r.too_slow) {
            oracle.note = "over budget";
        } else {
            oracle.count = r.count;
            oracle.ran = true;
        }
    } catch (const Interrupted&) {
        oracle.note = "timed out";
    }
    report.rows.push_back(oracle);
    check_agreement(report);
    return report;
}

void write_csv_header(std::ostream& os) {
    os << "dataset,query,engine,selectivity,seed,threads,granularity,count,duration_s,timed_out\n";
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_csv_row(std::ostream& os, const RunSpec& spec, const RunResult& r) {
    os << csv_field(spec.dataset) << ',' << csv_field(spec.query) << ',' << engine_name(spec.engine) << ','
       << spec.selectivity << ',' << spec.seed << ',' << spec.threads << ',' << r.granularity << ','
       << (r.timed_out ? std::string() : std::to_string(r.count)) << ',' << r.duration_s << ','
       << (r.timed_out ? "true" : "false") << '\n';
}

}  // namespace wcoj
