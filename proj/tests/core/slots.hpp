// Helpers that let tests use the one-based names s1, s2, ... and n1, n2, ...

#pragma once

#include "rcfd/core/types.hpp"

namespace rcfd::test {

/// Subcarrier s_k with symbol value v.
inline core::Slot s(std::uint32_t k, std::uint32_t v = 0) { return core::Slot{k - 1, v}; }

/// Node n_k.
inline core::NodeId n(std::uint32_t k) { return k - 1; }

} // namespace rcfd::test
