// Integer nanosecond time base shared by the simulator and the MAC layer.

#pragma once

#include <cmath>
#include <cstdint>

namespace rcfd {

using TimeNs = std::int64_t;

constexpr TimeNs kNsPerUs = 1000;
constexpr TimeNs kNsPerSecond = 1000000000;

/// Converts microseconds to nanoseconds, rounding to the nearest tick.
inline TimeNs us_to_ns(double us) { return static_cast<TimeNs>(std::llround(us * 1000.0)); }

inline TimeNs s_to_ns(double s) { return static_cast<TimeNs>(std::llround(s * 1e9)); }

inline double ns_to_s(TimeNs t) { return static_cast<double>(t) * 1e-9; }

inline double ns_to_us(TimeNs t) { return static_cast<double>(t) * 1e-3; }

} // namespace rcfd
