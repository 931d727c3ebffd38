#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wcoj/dataset.hpp"
#include "wcoj/engine.hpp"

namespace wcoj {

enum class EngineKind { Lftj, Ms, Hybrid, Oracle };

std::string_view engine_name(EngineKind e);
/// Throws ConfigError for an unknown name.
EngineKind parse_engine(std::string_view name);

struct RunSpec {
    std::string dataset;
    std::string query;  // catalog name or query text
    EngineKind engine = EngineKind::Lftj;
    double selectivity = 10;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    unsigned granularity = 0;  // 0: 1 for acyclic queries, 8 for cyclic
    double timeout_s = 1800;
    unsigned repetitions = 3;
    bool enumerate = false;
    bool idea3 = true;
    bool idea5 = true;
    bool idea6 = true;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

struct RunResult {
    std::uint64_t count = 0;
    std::vector<double> durations;
    double duration_s = 0;  // mean of the last two repetitions
    bool timed_out = false;
    unsigned granularity = 1;
};

/// Inclusive value range [lo, hi]; empty when lo > hi.
using Job = std::pair<Value, Value>;

/// Splits the sorted distinct values of `domain` into `parts` contiguous
/// ranges whose sizes differ by at most one. Surplus parts are empty.
std::vector<Job> partition_jobs(const std::vector<Value>& domain, std::size_t parts);

/// Values the first GAO attribute can take: the intersection of the first
/// columns of the atoms that start with it.
std::vector<Value> first_attribute_domain(const PreparedQuery& pq);

/// Query text for a catalog name, or the argument itself when it is query
/// text (contains '(').
Query resolve_query(std::string_view name_or_text);
bool query_is_cyclic(const Query& q);

/// Hybrid applies to cyclic queries whose default split leaves at least two
/// attributes to Minesweeper and at least one to LFTJ.
bool hybrid_applicable(const PreparedQuery& pq);

/// One execution: the jobs are claimed by `threads` workers from a shared
/// counter; counts are summed. Throws Interrupted when cfg.stop fires and
/// ConfigError for the oracle, which runs unpartitioned.
std::uint64_t execute(const PreparedQuery& pq, EngineKind engine, const EngineConfig& cfg, bool enumerate,
                      unsigned threads, std::size_t parts);

/// Loads the dataset, builds the database and runs the repetitions.
RunResult run_benchmark(const RunSpec& spec);
/// Same on an already loaded graph.
RunResult run_benchmark(const RunSpec& spec, const Graph& g);

struct VerifyRow {
    EngineKind engine;
    std::uint64_t count = 0;
    bool ran = false;
    std::string note;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    bool ok = true;
    std::string message;  // first disagreement
};

/// Runs every applicable engine and the oracle, and compares counts.
VerifyReport verify(const RunSpec& spec, const Graph& g);
/// Compares already collected rows: every row that ran must agree with the
/// first one.
void check_agreement(VerifyReport& report);

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const RunSpec& spec, const RunResult& r);

}  // namespace wcoj
