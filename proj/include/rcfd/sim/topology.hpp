// Node placement and range-based connectivity.

#pragma once

#include <cstdint>
#include <vector>

#include "rcfd/common/rng.hpp"
#include "rcfd/core/types.hpp"

namespace rcfd::sim {

using core::NodeId;

struct Point {
  double x = 0;
  double y = 0;
};

struct Topology {
  std::vector<Point> positions;
  /// Coverage radius in meters.
  double radius = 0;
  /// Sorted neighbor lists; symmetric.
  std::vector<std::vector<NodeId>> neighbors;

  std::size_t size() const { return positions.size(); }
  /// Directed in-range pairs, one application each.
  std::size_t directed_pairs() const;
  bool in_range(NodeId a, NodeId b) const;
};

/// Links every pair within the radius. Distances equal to the radius, up to
/// rounding, count as in range.
Topology connect(std::vector<Point> positions, double radius);

/// g x g lattice with spacing d and radius d * sqrt(2).
Topology build_grid(int g, double d);

/// N nodes uniform in [0, l]^2.
Topology build_random(int n, double l, double r, Rng& rng);

} // namespace rcfd::sim
