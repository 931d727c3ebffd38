#include "wcoj/edge_list.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <memory>
#include <string>

#include "wcoj/error.hpp"

namespace wcoj {

NodeDictionary::NodeDictionary(std::vector<std::int64_t> original_ids)
    : original_(std::move(original_ids)) {
    index_.reserve(original_.size());
    for (std::size_t i = 0; i < original_.size(); ++i) {
        index_.emplace(original_[i], static_cast<Value>(i));
    }
}

Value NodeDictionary::dense(std::int64_t original) const {
    auto it = index_.find(original);
    return it == index_.end() ? Value{-1} : it->second;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Parses the next non-negative integer token; advances `s` past it.
bool next_id(std::string_view& s, std::int64_t& out) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || out < 0) return false;
    const std::size_t used = static_cast<std::size_t>(ptr - s.data());
    if (used < s.size() && !is_space(s[used])) return false;
    s.remove_prefix(used);
    return true;
}

Graph build(std::vector<std::int64_t>& raw, std::vector<std::int64_t> ids, bool undirected) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    NodeDictionary dict(ids);

    std::vector<Value> data;
    data.reserve(raw.size() * (undirected ? 2 : 1));
    for (std::size_t i = 0; i + 1 < raw.size(); i += 2) {
        if (raw[i] == raw[i + 1]) continue;
        const Value u = dict.dense(raw[i]);
        const Value v = dict.dense(raw[i + 1]);
        data.push_back(u);
        data.push_back(v);
        if (undirected) {
            data.push_back(v);
            data.push_back(u);
        }
    }
    return Graph{Relation::from_flat("edge", {"src", "dst"}, std::move(data)), std::move(dict)};
}

}  // namespace

Graph parse_edge_list(std::string_view text, bool undirected) {
    std::vector<std::int64_t> raw;
    std::vector<std::int64_t> ids;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        ++line_no;

        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::int64_t u = 0, v = 0;
        if (!next_id(line, u) || !next_id(line, v) || !trim(line).empty()) {
            throw ParseError("edge list line " + std::to_string(line_no) +
                                 ": expected two non-negative integer ids",
                             line_no);
        }
        raw.push_back(u);
        raw.push_back(v);
        ids.push_back(u);
        ids.push_back(v);
    }
    return build(raw, std::move(ids), undirected);
}

Graph load_edge_list(const std::filesystem::path& path, bool undirected) {
    // gzread passes uncompressed files through unchanged.
    std::unique_ptr<gzFile_s, decltype(&gzclose)> file(gzopen(path.c_str(), "rb"), &gzclose);
    if (!file) throw ConfigError("cannot open edge list " + path.string());
    std::string text;
    char buf[1 << 16];
    int n = 0;
    while ((n = gzread(file.get(), buf, sizeof buf)) > 0) text.append(buf, static_cast<std::size_t>(n));
    if (n < 0) throw ConfigError("error reading " + path.string());
    return parse_edge_list(text, undirected);
}

Graph make_graph(std::size_t node_count, const std::vector<std::pair<Value, Value>>& edges,
                 bool undirected) {
    std::vector<std::int64_t> ids(node_count);
    for (std::size_t i = 0; i < node_count; ++i) ids[i] = static_cast<std::int64_t>(i);
    std::vector<std::int64_t> raw;
    raw.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= node_count ||
            static_cast<std::size_t>(v) >= node_count) {
            throw ContractViolation("edge endpoint outside the node range");
        }
        raw.push_back(u);
        raw.push_back(v);
    }
    return build(raw, std::move(ids), undirected);
}

}  // namespace wcoj
