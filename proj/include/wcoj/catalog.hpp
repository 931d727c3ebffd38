#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wcoj/query.hpp"

namespace wcoj {

struct CatalogEntry {
    std::string name;
    std::string text;
    bool cyclic;
};

/// The benchmark queries. Binary atoms read the `edge` relation; unary
/// atoms v1..v4 read node samples.
const std::vector<CatalogEntry>& query_catalog();

/// Throws ConfigError for an unknown name.
const CatalogEntry& catalog_entry(std::string_view name);
Query catalog_query(std::string_view name);

}  // namespace wcoj
