#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wcoj {

/// One relational atom `name(v1, ..., vk)`; vars index Query::var_names().
struct Atom {
    std::string relation;
    std::vector<std::size_t> vars;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// Strict inequality `var[less] < var[greater]`.
struct Filter {
    std::size_t less;
    std::size_t greater;

    friend bool operator==(const Filter&, const Filter&) = default;
};

/// A conjunctive query: a join of atoms plus strict inequality filters.
/// Variables are numbered by first appearance in the atoms.
class Query {
public:
    Query() = default;
    Query(std::vector<std::string> var_names, std::vector<Atom> atoms, std::vector<Filter> filters);

    const std::vector<std::string>& var_names() const noexcept { return var_names_; }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const std::vector<Filter>& filters() const noexcept { return filters_; }
    std::size_t var_count() const noexcept { return var_names_.size(); }
    std::optional<std::size_t> var_index(std::string_view name) const;

    /// Sub-query keeping the listed atoms (in the given order); variables
    /// and filters are unchanged.
    Query with_atoms(const std::vector<std::size_t>& atom_ids) const;

    /// Canonical text form, e.g. "edge(a,b), edge(b,c), a<b."
    std::string to_string() const;

private:
    std::vector<std::string> var_names_;
    std::vector<Atom> atoms_;
    std::vector<Filter> filters_;
};

/// Parses "name(v,...), ..., a<b<c." Chained inequalities expand to
/// consecutive pairs. Throws ParseError carrying the character offset.
Query parse_query(std::string_view text);

}  // namespace wcoj
