#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "wcoj/agm.hpp"
#include "wcoj/bench.hpp"
#include "wcoj/error.hpp"
#include "wcoj/hypergraph.hpp"

namespace {

struct Options {
    wcoj::RunSpec spec;
    std::string engine = "lftj";
    bool count = false;
    std::string csv;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--dataset", o.spec.dataset, "path, SNAP name or er:n=..,p=..,seed=..")->required();
    cmd->add_option("--query", o.spec.query, "catalog name or query text")->required();
    cmd->add_option("--selectivity", o.spec.selectivity, "node sampling probability is 1/S")
        ->check(CLI::Range(1.0, 1e18));
    cmd->add_option("--seed", o.spec.seed);
    cmd->add_option("--threads", o.spec.threads)->check(CLI::Range(1U, 1024U));
    cmd->add_option("--granularity", o.spec.granularity, "jobs per thread (default 1 acyclic, 8 cyclic)")
        ->check(CLI::Range(1U, 1U << 20));
    cmd->add_option("--timeout", o.spec.timeout_s, "seconds per execution")->check(CLI::PositiveNumber);
    auto* count = cmd->add_flag("--count", o.count, "count without enumerating (default)");
    cmd->add_flag("--enumerate", o.spec.enumerate, "visit every output tuple")->excludes(count);
    cmd->add_flag("--no-idea3{false}", o.spec.idea3, "disable the probe cache");
    cmd->add_flag("--no-idea5{false}", o.spec.idea5, "disable complete nodes");
    cmd->add_flag("--no-idea6{false}", o.spec.idea6, "disable skeleton mode");
}

void print_cover(const wcoj::Query& q) {
    const wcoj::Hypergraph h = wcoj::Hypergraph::of(q);
    const auto cover = wcoj::agm_bound(h, std::vector<std::uint64_t>(h.edges.size(), 2));
    for (std::size_t i = 0; i < q.atoms().size(); ++i) {
        std::cout << q.atoms()[i].relation << '(';
        for (std::size_t j = 0; j < q.atoms()[i].vars.size(); ++j) {
            std::cout << (j ? "," : "") << q.var_names()[q.atoms()[i].vars[j]];
        }
        std::cout << ")\t" << cover.weights[i].to_string() << '\n';
    }
    std::cout << "exponent\t" << cover.total_weight().to_string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Worst-case optimal join engines and benchmark harness"};
    app.require_subcommand(1);

    Options run_opts;
    auto* run = app.add_subcommand("run", "run one engine and report count and time");
    add_common(run, run_opts);
    run->add_option("--engine", run_opts.engine, "lftj, ms, hybrid or oracle");
    run->add_option("--repetitions", run_opts.spec.repetitions)->check(CLI::Range(1U, 1000U));
    run->add_option("--csv", run_opts.csv, "append a CSV row to this file");

    Options verify_opts;
    verify_opts.spec.timeout_s = 600;
    auto* ver = app.add_subcommand("verify", "run all applicable engines and the oracle and compare counts");
    add_common(ver, verify_opts);

    std::string agm_query;
    auto* agm = app.add_subcommand("agm", "print the optimal fractional edge cover");
    agm->add_option("--query", agm_query, "catalog name or query text")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto& o = run_opts;
            o.spec.engine = wcoj::parse_engine(o.engine);
            const wcoj::RunResult r = wcoj::run_benchmark(o.spec);
            if (!o.csv.empty()) {
                const bool fresh = !std::ifstream(o.csv).good();
                std::ofstream out(o.csv, std::ios::app);
                if (!out) throw wcoj::ConfigError("cannot write " + o.csv);
                if (fresh) wcoj::write_csv_header(out);
                wcoj::write_csv_row(out, o.spec, r);
            }
            wcoj::write_csv_header(std::cout);
            wcoj::write_csv_row(std::cout, o.spec, r);
            return r.timed_out ? 3 : 0;
        }
        if (*ver) {
            auto& o = verify_opts;
            const wcoj::VerifyReport rep = wcoj::verify(o.spec, wcoj::load_dataset(o.spec.dataset));
            for (const auto& row : rep.rows) {
                std::cout << wcoj::engine_name(row.engine) << '\t'
                          << (row.ran ? std::to_string(row.count) : "-") << '\t' << row.note << '\n';
            }
            std::cout << (rep.ok ? "PASS" : "FAIL " + rep.message) << '\n';
            return rep.ok ? 0 : 1;
        }
        if (*agm) {
            print_cover(wcoj::resolve_query(agm_query));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
