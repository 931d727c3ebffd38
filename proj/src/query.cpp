#include "wcoj/query.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "wcoj/error.hpp"

namespace wcoj {

Query::Query(std::vector<std::string> var_names, std::vector<Atom> atoms, std::vector<Filter> filters)
    : var_names_(std::move(var_names)), atoms_(std::move(atoms)), filters_(std::move(filters)) {
    std::vector<bool> covered(var_names_.size(), false);
    for (const Atom& a : atoms_) {
        if (a.vars.empty()) throw ContractViolation("atom " + a.relation + " has no variables");
        std::unordered_set<std::size_t> seen;
        for (std::size_t v : a.vars) {
            if (v >= var_names_.size()) throw ContractViolation("atom variable out of range");
            if (!seen.insert(v).second) {
                throw ContractViolation("variable " + var_names_[v] + " repeated in atom " + a.relation);
            }
            covered[v] = true;
        }
    }
    if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
        throw ContractViolation("every query variable must appear in an atom");
    }
    for (const Filter& f : filters_) {
        if (f.less >= var_names_.size() || f.greater >= var_names_.size() || f.less == f.greater) {
            throw ContractViolation("malformed filter");
        }
    }
}

std::optional<std::size_t> Query::var_index(std::string_view name) const {
    for (std::size_t i = 0; i < var_names_.size(); ++i) {
        if (var_names_[i] == name) return i;
    }
    return std::nullopt;
}

Query Query::with_atoms(const std::vector<std::size_t>& atom_ids) const {
    Query q;
    q.var_names_ = var_names_;
    q.filters_ = filters_;
    for (std::size_t id : atom_ids) q.atoms_.push_back(atoms_.at(id));
    return q;
}

std::string Query::to_string() const {
    std::string s;
    for (const Atom& a : atoms_) {
        if (!s.empty()) s += ", ";
        s += a.relation + '(';
        for (std::size_t i = 0; i < a.vars.size(); ++i) {
            if (i) s += ',';
            s += var_names_[a.vars[i]];
        }
        s += ')';
    }
    for (const Filter& f : filters_) {
        s += ", " + var_names_[f.less] + '<' + var_names_[f.greater];
    }
    return s + '.';
}

namespace {

struct Token {
    enum Kind { Ident, LParen, RParen, Comma, Less, Dot, End } kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i + 1;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '-')) ++j;
            out.push_back({Token::Ident, std::string(s.substr(i, j - i)), i});
            i = j;
            continue;
        }
        Token::Kind k;
        switch (c) {
            case '(': k = Token::LParen; break;
            case ')': k = Token::RParen; break;
            case ',': k = Token::Comma; break;
            case '<': k = Token::Less; break;
            case '.': k = Token::Dot; break;
            default:
                throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " +
                                     std::to_string(i), i);
        }
        out.push_back({k, std::string(1, c), i});
        ++i;
    }
    out.push_back({Token::End, "", s.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    Query parse() {
        struct PendingFilter { std::string a, b; std::size_t pos; };
        std::vector<PendingFilter> pending;
        std::vector<Atom> atoms;
        std::vector<std::string> names;
        auto var_id = [&](const std::string& n) {
            auto it = std::find(names.begin(), names.end(), n);
            if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
            names.push_back(n);
            return names.size() - 1;
        };

        while (true) {
            const Token& head = expect(Token::Ident, "relation or variable name");
            if (peek().kind == Token::LParen) {
                ++at_;
                Atom atom{head.text, {}};
                std::vector<std::string> arg_names;
                while (true) {
                    const Token& v = expect(Token::Ident, "variable name");
                    if (std::find(arg_names.begin(), arg_names.end(), v.text) != arg_names.end()) {
                        fail("variable '" + v.text + "' repeated in atom", v.pos);
                    }
                    arg_names.push_back(v.text);
                    if (peek().kind == Token::Comma) { ++at_; continue; }
                    expect(Token::RParen, "',' or ')'");
                    break;
                }
                for (const auto& n : arg_names) atom.vars.push_back(var_id(n));
                atoms.push_back(std::move(atom));
            } else if (peek().kind == Token::Less) {
                std::string prev = head.text;
                std::size_t prev_pos = head.pos;
                while (peek().kind == Token::Less) {
                    ++at_;
                    const Token& next = expect(Token::Ident, "variable name");
                    pending.push_back({prev, next.text, prev_pos});
                    prev = next.text;
                    prev_pos = next.pos;
                }
            } else {
                fail("expected '(' or '<' after '" + head.text + "'", peek().pos);
            }

            if (peek().kind == Token::Comma) { ++at_; continue; }
            expect(Token::Dot, "',' or '.'");
            break;
        }
        if (peek().kind != Token::End) fail("unexpected text after '.'", peek().pos);
        if (atoms.empty()) fail("query has no atoms", 0);

        std::vector<Filter> filters;
        for (const auto& f : pending) {
            auto a = std::find(names.begin(), names.end(), f.a);
            auto b = std::find(names.begin(), names.end(), f.b);
            if (a == names.end() || b == names.end()) {
                fail("filter " + f.a + "<" + f.b + " uses a variable not bound by any atom", f.pos);
            }
            if (a == b) fail("filter " + f.a + "<" + f.b + " compares a variable with itself", f.pos);
            filters.push_back({static_cast<std::size_t>(a - names.begin()),
                               static_cast<std::size_t>(b - names.begin())});
        }
        return Query(std::move(names), std::move(atoms), std::move(filters));
    }

private:
    const Token& peek() const { return toks_[at_]; }

    const Token& expect(Token::Kind k, const char* what) {
        if (peek().kind != k) {
            fail(std::string("expected ") + what +
                     (peek().kind == Token::End ? " before end of input" : " near '" + peek().text + "'"),
                 peek().pos);
        }
        return toks_[at_++];
    }

    [[noreturn]] static void fail(const std::string& msg, std::size_t pos) {
        throw ParseError("query parse error at offset " + std::to_string(pos) + ": " + msg, pos);
    }

    std::vector<Token> toks_;
    std::size_t at_ = 0;
};

}  // namespace

Query parse_query(std::string_view text) { return Parser(text).parse(); }

}  // namespace wcoj
