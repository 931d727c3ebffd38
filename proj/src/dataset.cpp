#include "wcoj/dataset.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>

#include "wcoj/error.hpp"

namespace wcoj {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

double unit_hash(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    const std::uint64_t h = splitmix64(a ^ splitmix64(b ^ splitmix64(c)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

bool sampled(std::uint64_t seed, std::uint64_t sample_index, std::int64_t node_id, double s) {
    if (s < 1.0) throw ConfigError("selectivity must be >= 1");
    if (s == 1.0) return true;
    return unit_hash(seed, sample_index, static_cast<std::uint64_t>(node_id)) < 1.0 / s;
}

Relation sample_nodes(const Graph& g, double s, std::uint64_t seed, std::uint64_t sample_index,
                      const std::string& name) {
    std::vector<Value> data;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (sampled(seed, sample_index, g.nodes.original(static_cast<Value>(i)), s)) {
            data.push_back(static_cast<Value>(i));
        }
    }
    return Relation::from_flat(name, {"node"}, std::move(data));
}

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    std::vector<std::pair<Value, Value>> edges;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            if (unit_hash(seed, u * n + v, 0xe5) < p) {
                edges.emplace_back(static_cast<Value>(u), static_cast<Value>(v));
            }
        }
    }
    return make_graph(n, edges, true);
}

const std::vector<KnownDataset>& known_datasets() {
    using C = DatasetClass;
    static const std::vector<KnownDataset> list = {
        {"wiki-Vote", "wiki-Vote.txt", C::Small, 608389},
        {"p2p-Gnutella31", "p2p-Gnutella31.txt", C::Small, 2024},
        {"p2p-Gnutella04", "p2p-Gnutella04.txt", C::Small, 934},
        {"loc-Brightkite", "loc-brightkite_edges.txt", C::Small, 494728},
        {"ego-Facebook", "facebook_combined.txt", C::Small, 1612010},
        {"email-Enron", "email-Enron.txt", C::Small, 727044},
        {"ca-GrQc", "ca-GrQc.txt", C::Small, 48260},
        {"ca-CondMat", "ca-CondMat.txt", C::Small, 173361},
        {"ego-Twitter", "twitter_combined.txt", C::Large, 13082506},
        {"soc-Slashdot0902", "soc-Slashdot0902.txt", C::Large, 602592},
        {"soc-Slashdot0811", "soc-Slashdot0811.txt", C::Large, 551724},
        {"soc-Epinions1", "soc-Epinions1.txt", C::Large, 1624481},
        {"soc-Pokec", "soc-pokec-relationships.txt", C::Large, 32557458},
        {"soc-LiveJournal1", "soc-LiveJournal1.txt", C::Large, 285730264},
        {"com-Orkut", "com-orkut.ungraph.txt", C::Large, 627584181},
    };
    return list;
}

const KnownDataset* find_known_dataset(std::string_view name) {
    for (const auto& d : known_datasets()) {
        if (d.name == name) return &d;
    }
    return nullptr;
}

std::vector<double> default_selectivities(DatasetClass cls) {
    if (cls == DatasetClass::Small) return {8, 80};
    return {10, 100, 1000};
}

std::filesystem::path data_dir() {
    if (const char* dir = std::getenv("WCOJ_DATA_DIR"); dir && *dir) return dir;
    return "data";
}

std::optional<std::filesystem::path> resolve_dataset(std::string_view name) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::is_regular_file(fs::path(name), ec)) return fs::path(name);
    std::vector<std::string> stems = {std::string(name), std::string(name) + ".txt"};
    if (const auto* known = find_known_dataset(name)) stems.insert(stems.begin(), known->file);
    for (const auto& stem : stems) {
        for (const char* ext : {"", ".gz"}) {
            fs::path p = data_dir() / (stem + ext);
            if (fs::is_regular_file(p, ec)) return p;
        }
    }
    return std::nullopt;
}

namespace {

Graph parse_er(std::string_view spec) {
    std::map<std::string, std::string> kv;
    std::string_view rest = spec.substr(3);
    while (!rest.empty()) {
        const std::size_t comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        rest.remove_prefix(comma == std::string_view::npos ? rest.size() : comma + 1);
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos) throw ConfigError("bad generator option '" + std::string(item) + "'");
        kv[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    }
    try {
        const std::size_t n = std::stoul(kv.count("n") ? kv.at("n") : "60");
        const double p = std::stod(kv.count("p") ? kv.at("p") : "0.1");
        const std::uint64_t seed = std::stoull(kv.count("seed") ? kv.at("seed") : "1");
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("edge probability must lie in [0,1]");
        return erdos_renyi(n, p, seed);
    } catch (const std::logic_error&) {
        throw ConfigError("bad generator spec '" + std::string(spec) + "'");
    }
}

}  // namespace

Graph load_dataset(std::string_view spec) {
    if (spec.rfind("er:", 0) == 0) return parse_er(spec);
    if (auto path = resolve_dataset(spec)) return load_edge_list(*path, true);
    throw ConfigError("dataset '" + std::string(spec) + "' not found (looked in " + data_dir().string() +
                      "; set WCOJ_DATA_DIR)");
}

Database make_database(const Graph& g, const Query& q, double selectivity, std::uint64_t seed) {
    Database db;
    db.add(Relation::from_flat("edge", {"src", "dst"},
                               std::vector<Value>(g.edges.flat().begin(), g.edges.flat().end())));
    std::set<std::string> done;
    for (const auto& atom : q.atoms()) {
        if (atom.relation == "edge" || done.count(atom.relation)) continue;
        const std::string& r = atom.relation;
        if (atom.vars.size() != 1 || r.size() < 2 || r[0] != 'v' ||
            r.find_first_not_of("0123456789", 1) != std::string::npos) {
            throw ConfigError("relation '" + r + "' is neither edge nor a node sample v<k>");
        }
        db.add(sample_nodes(g, selectivity, seed, std::stoull(r.substr(1)), r));
        done.insert(r);
    }
    return db;
}

}  // namespace wcoj
