#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wcoj {

/// Malformed input text (edge lists, query strings).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line_or_pos)
        : std::runtime_error(what), where_(line_or_pos) {}
    std::size_t where() const noexcept { return where_; }

private:
    std::size_t where_;
};

/// Inconsistent setup: wrong permutation, missing index, invalid engine options.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition was not met by the caller.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Structural problems with a query hypergraph (e.g. an uncovered vertex).
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wcoj
