#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace wcoj {

// Attribute values are dense node ids (>= 0). A handful of reserved values sit
// outside that range: -1 is the frontier start, and +/-infinity bound open
// intervals. They are kept well inside int64 so x-1 / x+1 never overflow.
using Value = std::int64_t;

inline constexpr Value kFrontierStart = -1;
inline constexpr Value kNegInf = -(Value{1} << 62);
inline constexpr Value kPosInf = Value{1} << 62;
inline constexpr Value kWildcard = std::numeric_limits<Value>::min();

using Tuple = std::vector<Value>;

inline bool is_infinite(Value v) { return v == kNegInf || v == kPosInf; }

inline std::string value_to_string(Value v) {
    if (v == kNegInf) return "-inf";
    if (v == kPosInf) return "+inf";
    if (v == kWildcard) return "*";
    return std::to_string(v);
}

}  // namespace wcoj
