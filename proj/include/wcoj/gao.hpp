#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wcoj/hypergraph.hpp"
#include "wcoj/query.hpp"

namespace wcoj {

/// Global attribute order. order[i] is the variable at GAO position i.
struct Gao {
    std::vector<std::size_t> order;
    bool is_neo = false;

    /// position[v] = GAO position of variable v.
    std::vector<std::size_t> positions() const;
    std::vector<std::string> names(const Query& q) const;
};

/// For each position d, the sets vars(R) ∩ {A_0..A_{d-1}} over the edges R
/// containing A_d must be totally ordered by inclusion.
bool is_neo(const Hypergraph& h, const std::vector<std::size_t>& order);

/// Longest run of consecutive positions whose variables share an atom,
/// measured in variables.
std::size_t gao_run_length(const Hypergraph& h, const std::vector<std::size_t>& order);

/// Best-scoring order over all permutations; restricted to NEOs when the
/// query is beta-acyclic. Ties go to the lexicographically smallest list of
/// variable names.
Gao select_gao(const Query& q);

/// Builds a Gao from variable names, computing is_neo. Throws ConfigError
/// when the names are not a permutation of the query variables.
Gao make_gao(const Query& q, const std::vector<std::string>& names);

/// Greedy scan in textual order: an atom is kept when the kept set stays
/// beta-acyclic and NEO under `gao`. Returns atom indices.
std::vector<std::size_t> beta_acyclic_skeleton(const Query& q, const Gao& gao);

}  // namespace wcoj
