#include "wcoj/catalog.hpp"

#include "wcoj/error.hpp"

namespace wcoj {

const std::vector<CatalogEntry>& query_catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"3-clique", "edge(a,b), edge(b,c), edge(a,c), a<b<c.", true},
        {"4-clique", "edge(a,b), edge(b,c), edge(c,d), edge(a,c), edge(a,d), edge(b,d), a<b<c<d.", true},
        {"4-cycle", "edge(a,b), edge(b,c), edge(c,d), edge(a,d), a<b<c<d.", true},
        {"3-path", "v1(a), v2(d), edge(a,b), edge(b,c), edge(c,d).", false},
        {"4-path", "v1(a), v2(e), edge(a,b), edge(b,c), edge(c,d), edge(d,e).", false},
        {"1-tree", "v1(b), v2(c), edge(a,b), edge(a,c).", false},
        {"2-tree",
         "edge(a,b), edge(a,c), edge(b,d), edge(b,e), edge(c,f), edge(c,g), "
         "v1(d), v2(e), v3(f), v4(g).",
         false},
        {"2-comb", "v1(c), v2(d), edge(a,b), edge(a,c), edge(b,d).", false},
        {"2-lollipop", "v1(a), edge(a,b), edge(b,c), edge(c,d), edge(d,e), edge(c,e).", true},
        {"3-lollipop",
         "v1(a), edge(a,b), edge(b,c), edge(c,d), "
         "edge(d,e), edge(d,f), edge(d,g), edge(e,f), edge(e,g), edge(f,g).",
         true},
    };
    return entries;
}

const CatalogEntry& catalog_entry(std::string_view name) {
    for (const auto& e : query_catalog()) {
        if (e.name == name) return e;
    }
    std::string known;
    for (const auto& e : query_catalog()) known += (known.empty() ? "" : ", ") + e.name;
    throw ConfigError("unknown query '" + std::string(name) + "' (known: " + known + ")");
}

Query catalog_query(std::string_view name) { return parse_query(catalog_entry(name).text); }

}  // namespace wcoj
