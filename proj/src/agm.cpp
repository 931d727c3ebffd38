#include "wcoj/agm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wcoj/error.hpp"

namespace wcoj {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = g ? num / g : 0;
    den_ = g ? den / g : 1;
}

std::string Rational::to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + '/' + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const std::int64_t l = checked_mul(a.den_ / g, b.den_);
    return Rational(checked_add(checked_mul(a.num_, l / a.den_), checked_mul(b.num_, l / b.den_)), l);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    const std::int64_t n1 = g1 ? a.num_ / g1 : 0, d2 = g1 ? b.den_ / g1 : b.den_;
    const std::int64_t n2 = g2 ? b.num_ / g2 : 0, d1 = g2 ? a.den_ / g2 : a.den_;
    return Rational(checked_mul(n1, n2), checked_mul(d1, d2));
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("division by zero");
    return a * Rational(b.den_, b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 l = static_cast<__int128>(a.num_) * b.den_;
    const __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
}

Rational FractionalEdgeCover::total_weight() const {
    Rational s;
    for (const auto& w : weights) s += w;
    return s;
}

bool is_feasible_cover(const Hypergraph& h, const std::vector<Rational>& weights) {
    if (weights.size() != h.edges.size()) return false;
    for (const auto& w : weights) {
        if (w < Rational(0)) return false;
    }
    for (std::size_t v = 0; v < h.vertex_count; ++v) {
        Rational s;
        for (std::size_t f = 0; f < h.edges.size(); ++f) {
            if (contains(h.edges[f], v)) s += weights[f];
        }
        if (s < Rational(1)) return false;
    }
    return true;
}

namespace {

using Row = std::vector<Rational>;

// Solves A x = b for square A; returns false when A is singular.
bool solve(std::vector<Row> a, Row b, Row& x) {
    const std::size_t m = b.size();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        while (piv < m && a[piv][col] == Rational(0)) ++piv;
        if (piv == m) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || a[r][col] == Rational(0)) continue;
            const Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    x.assign(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) x[i] = b[i] / a[i][i];
    return true;
}

}  // namespace

FractionalEdgeCover agm_bound(const Hypergraph& h, const std::vector<std::uint64_t>& sizes) {
    const std::size_t m = h.edges.size();
    const std::size_t n = h.vertex_count;
    if (sizes.size() != m) throw ContractViolation("one size per edge required");
    for (std::uint64_t s : sizes) {
        if (s < 1) throw ContractViolation("relation sizes must be >= 1");
    }
    VarSet covered = 0;
    for (VarSet e : h.edges) covered |= e;
    for (std::size_t v = 0; v < n; ++v) {
        if (!contains(covered, v)) throw StructuralError("vertex in no edge; no fractional cover exists");
    }

    // Constraint rows: vertex covers first, then x_F >= 0.
    std::vector<Row> rows;
    Row rhs;
    for (std::size_t v = 0; v < n; ++v) {
        Row r(m);
        for (std::size_t f = 0; f < m; ++f) r[f] = Rational(contains(h.edges[f], v) ? 1 : 0);
        rows.push_back(r);
        rhs.push_back(Rational(1));
    }
    for (std::size_t f = 0; f < m; ++f) {
        Row r(m, Rational(0));
        r[f] = Rational(1);
        rows.push_back(r);
        rhs.push_back(Rational(0));
    }
    const std::size_t k = rows.size();
    if (k > 40) throw ConfigError("AGM vertex enumeration limited to 40 constraints");

    std::vector<double> logs(m);
    for (std::size_t f = 0; f < m; ++f) logs[f] = std::log2(static_cast<double>(sizes[f]));

    std::vector<Row> optimal;
    double best = INFINITY;
    constexpr double kTieTolerance = 1e-9;

    // Iterate over all m-subsets of the k rows.
    std::vector<std::size_t> pick(m);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        std::vector<Row> a;
        Row b;
        for (std::size_t i : pick) {
            a.push_back(rows[i]);
            b.push_back(rhs[i]);
        }
        Row x;
        if (solve(a, b, x) && is_feasible_cover(h, x)) {
            double score = 0;
            for (std::size_t f = 0; f < m; ++f) score += x[f].to_double() * logs[f];
            if (score < best - kTieTolerance) {
                best = score;
                optimal.clear();
            }
            if (score <= best + kTieTolerance &&
                std::find(optimal.begin(), optimal.end(), x) == optimal.end()) {
                optimal.push_back(x);
            }
        }
        std::size_t i = m;
        while (i > 0 && pick[i - 1] == k - m + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
    }

    FractionalEdgeCover out;
    out.weights.assign(m, Rational(0));
    const Rational share(1, static_cast<std::int64_t>(optimal.size()));
    for (const Row& x : optimal) {
        for (std::size_t f = 0; f < m; ++f) out.weights[f] += x[f] * share;
    }
    for (std::size_t f = 0; f < m; ++f) out.log_bound += out.weights[f].to_double() * logs[f];
    return out;
}

}  // namespace wcoj
