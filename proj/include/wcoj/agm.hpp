#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "wcoj/hypergraph.hpp"

namespace wcoj {

/// Exact rational with 64-bit parts; arithmetic throws std::overflow_error
/// instead of wrapping.
class Rational {
public:
    Rational(std::int64_t num = 0, std::int64_t den = 1);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string to_string() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const { return Rational(-num_, den_); }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    std::int64_t num_;
    std::int64_t den_;
};

struct FractionalEdgeCover {
    std::vector<Rational> weights;  // one per edge
    double log_bound = 0.0;         // sum of weight * log2(size)

    Rational total_weight() const;
};

/// Optimal fractional edge cover minimising sum x_F * log2|R_F|, found by
/// enumerating every vertex of the cover polytope. When several vertices
/// are optimal, their barycenter is returned. Throws StructuralError when a
/// vertex lies in no edge and ContractViolation when a size is < 1.
FractionalEdgeCover agm_bound(const Hypergraph& h, const std::vector<std::uint64_t>& sizes);

/// Exact feasibility check of a cover.
bool is_feasible_cover(const Hypergraph& h, const std::vector<Rational>& weights);

}  // namespace wcoj
