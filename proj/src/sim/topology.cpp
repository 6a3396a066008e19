#include "rcfd/sim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcfd::sim {

std::size_t Topology::directed_pairs() const
{
  std::size_t n = 0;
  for (const auto& v : neighbors) {
    n += v.size();
  }
  return n;
}

bool Topology::in_range(NodeId a, NodeId b) const
{
  const auto& v = neighbors[a];
  return std::binary_search(v.begin(), v.end(), b);
}

Topology connect(std::vector<Point> positions, double radius)
{
  Topology t;
  t.positions = std::move(positions);
  t.radius = radius;
  const std::size_t n = t.positions.size();
  t.neighbors.assign(n, {});
  const double limit = radius * (1 + 1e-9);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      const double dx = t.positions[a].x - t.positions[b].x;
      const double dy = t.positions[a].y - t.positions[b].y;
      if (std::hypot(dx, dy) <= limit) {
        t.neighbors[a].push_back(b);
        t.neighbors[b].push_back(a);
      }
    }
  }
  for (auto& v : t.neighbors) {
    std::sort(v.begin(), v.end());
  }
  return t;
}

Topology build_grid(int g, double d)
{
  if (g < 2 || !(d > 0)) {
    throw std::invalid_argument("grid needs g >= 2 and d > 0");
  }
  std::vector<Point> pos;
  pos.reserve(static_cast<std::size_t>(g) * g);
  for (int row = 0; row < g; ++row) {
    for (int col = 0; col < g; ++col) {
      pos.push_back({col * d, row * d});
    }
  }
  return connect(std::move(pos), d * std::sqrt(2.0));
}

Topology build_random(int n, double l, double r, Rng& rng)
{
  if (n < 2 || !(l > 0) || !(r > 0)) {
    throw std::invalid_argument("random topology needs N >= 2 and l, r > 0");
  }
  std::vector<Point> pos(n);
  for (auto& p : pos) {
    p.x = rng.uniform() * l;
    p.y = rng.uniform() * l;
  }
  return connect(std::move(pos), r);
}

} // namespace rcfd::sim
