#pragma once

#include <cstdint>

#include "wcoj/engine.hpp"

namespace wcoj {

struct OracleResult {
    std::uint64_t count = 0;
    bool too_slow = false;  // work budget exhausted; count is partial
};

inline constexpr std::uint64_t kDefaultOracleBudget = 1'000'000'000;

/// Nested-loop join in textual atom order with hash lookups on the columns
/// bound by earlier atoms. Shares no code with the real engines. When
/// `sink` is given, the output is sorted (query variable order) before
/// being emitted.
OracleResult oracle_join(const Query& q, const Database& db, const Sink* sink,
                         std::uint64_t budget = kDefaultOracleBudget, const StopToken* stop = nullptr);

}  // namespace wcoj
