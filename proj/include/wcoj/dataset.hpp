#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wcoj/edge_list.hpp"
#include "wcoj/engine.hpp"
#include "wcoj/query.hpp"

namespace wcoj {

/// splitmix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Name of the sampling generator; bump when the hash changes.
inline constexpr std::string_view kSamplerVersion = "splitmix64-v1";

/// True when node `node_id` enters sample `sample_index` at selectivity s.
/// Each (seed, sample, node) triple is hashed on its own, so the decision
/// does not depend on the order or number of nodes.
bool sampled(std::uint64_t seed, std::uint64_t sample_index, std::int64_t node_id, double s);

/// Unary relation holding the dense ids of the sampled nodes. The hash
/// sees the graph's original node ids.
Relation sample_nodes(const Graph& g, double s, std::uint64_t seed, std::uint64_t sample_index,
                      const std::string& name = "v");

/// G(n, p) with each undirected pair decided by the same hash.
Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Small datasets run at selectivities {8, 80}, large ones at {10, 100, 1000}.
enum class DatasetClass { Small, Large };

struct KnownDataset {
    std::string name;
    std::string file;  // SNAP download name
    DatasetClass cls;
    std::optional<std::uint64_t> triangles;
};

const std::vector<KnownDataset>& known_datasets();
const KnownDataset* find_known_dataset(std::string_view name);
std::vector<double> default_selectivities(DatasetClass cls);

/// $WCOJ_DATA_DIR, or ./data when unset.
std::filesystem::path data_dir();

/// Locates a dataset file: an existing path, or a known name looked up in
/// data_dir() under its SNAP file name or "<name>.txt", optionally gzipped.
std::optional<std::filesystem::path> resolve_dataset(std::string_view name);

/// Loads "er:n=60,p=0.1,seed=3", a path or a known dataset name as an
/// undirected graph. Throws ConfigError when nothing matches.
Graph load_dataset(std::string_view spec);

/// Database for a query over a graph: `edge(src,dst)` plus one node sample
/// per unary atom named v<k>, drawn with sample index k.
Database make_database(const Graph& g, const Query& q, double selectivity, std::uint64_t seed);

}  // namespace wcoj
