#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wcoj/error.hpp"
#include "wcoj/value.hpp"

namespace wcoj {

/// A gap box over n attributes in GAO order: an equality/wildcard pattern,
/// one open interval right after it, and wildcards for the rest.
///
///     <*, 7, (4,9), *, *>   pattern = <*, 7>, interval on attribute 2
///
/// The single-interval-then-wildcards shape is enforced by construction.
class Constraint {
public:
    enum class Kind { Equal, Wildcard, Interval };

    struct Component {
        Kind kind;
        Value value = 0;  // Equal
        Value lo = 0;     // Interval
        Value hi = 0;
    };

    Constraint() = default;
    Constraint(std::size_t arity, std::vector<Value> pattern, Value lo, Value hi)
        : arity_(arity), pattern_(std::move(pattern)), lo_(lo), hi_(hi) {
        if (pattern_.size() >= arity_)
            throw ContractViolation("constraint interval position out of range");
        if (!(lo_ < hi_))
            throw ContractViolation("constraint interval must satisfy lo < hi");
    }

    std::size_t arity() const noexcept { return arity_; }
    std::size_t interval_depth() const noexcept { return pattern_.size(); }
    /// Components before the interval; kWildcard marks '*'.
    const std::vector<Value>& pattern() const noexcept { return pattern_; }
    Value lo() const noexcept { return lo_; }
    Value hi() const noexcept { return hi_; }

    Component component(std::size_t i) const {
        if (i < pattern_.size()) {
            return pattern_[i] == kWildcard ? Component{Kind::Wildcard}
                                            : Component{Kind::Equal, pattern_[i]};
        }
        if (i == pattern_.size()) return Component{Kind::Interval, 0, lo_, hi_};
        return Component{Kind::Wildcard};
    }

    /// True when the pattern admits `prefix` (only the first
    /// interval_depth() entries are inspected).
    bool pattern_matches(std::span<const Value> prefix) const {
        for (std::size_t i = 0; i < pattern_.size(); ++i) {
            if (pattern_[i] != kWildcard && pattern_[i] != prefix[i]) return false;
        }
        return true;
    }

    bool contains(std::span<const Value> t) const {
        const Value v = t[pattern_.size()];
        return pattern_matches(t) && lo_ < v && v < hi_;
    }

    std::string to_string() const {
        std::string s = "<";
        for (std::size_t i = 0; i < arity_; ++i) {
            if (i) s += ',';
            if (i < pattern_.size()) {
                s += value_to_string(pattern_[i]);
            } else if (i == pattern_.size()) {
                s += '(' + value_to_string(lo_) + ',' + value_to_string(hi_) + ')';
            } else {
                s += '*';
            }
        }
        return s + '>';
    }

    friend bool operator==(const Constraint&, const Constraint&) = default;

private:
    std::size_t arity_ = 0;
    std::vector<Value> pattern_;
    Value lo_ = kNegInf;
    Value hi_ = kPosInf;
};

}  // namespace wcoj
