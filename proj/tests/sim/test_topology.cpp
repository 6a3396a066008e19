#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rcfd/sim/config.hpp"
#include "rcfd/sim/topology.hpp"

using namespace rcfd;
using namespace rcfd::sim;

TEST_CASE("a 3 x 3 grid has corner, edge and center degrees 3, 5 and 8")
{
  const Topology t = build_grid(3, 100);
  REQUIRE(t.size() == 9);
  CHECK(t.radius == doctest::Approx(141.42).epsilon(1e-4));
  CHECK(t.neighbors[0].size() == 3);
  CHECK(t.neighbors[2].size() == 3);
  CHECK(t.neighbors[6].size() == 3);
  CHECK(t.neighbors[8].size() == 3);
  CHECK(t.neighbors[1].size() == 5);
  CHECK(t.neighbors[3].size() == 5);
  CHECK(t.neighbors[5].size() == 5);
  CHECK(t.neighbors[7].size() == 5);
  CHECK(t.neighbors[4].size() == 8);
  CHECK(t.directed_pairs() == 40);
  // Two cells apart is out of range.
  CHECK_FALSE(t.in_range(0, 2));
  CHECK(t.in_range(0, 4));
}

TEST_CASE("grid sizes and the complete 2 x 2 case")
{
  CHECK(build_grid(10, 100).size() == 100);
  const Topology t = build_grid(2, 1);
  REQUIRE(t.size() == 4);
  for (NodeId i = 0; i < 4; ++i) {
    CHECK(t.neighbors[i].size() == 3);
  }
  CHECK_THROWS_AS(build_grid(1, 100), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(3, 0), std::invalid_argument);
}

TEST_CASE("adjacency is symmetric and sorted")
{
  Rng rng(42);
  const Topology t = build_random(40, 300, 80, rng);
  for (NodeId a = 0; a < t.size(); ++a) {
    CHECK(std::is_sorted(t.neighbors[a].begin(), t.neighbors[a].end()));
    for (NodeId b : t.neighbors[a]) {
      CHECK(b != a);
      CHECK(t.in_range(b, a));
    }
  }
}

TEST_CASE("random placement is reproducible under a seed")
{
  Rng a(7);
  Rng b(7);
  const Topology x = build_random(50, 500, 60, a);
  const Topology y = build_random(50, 500, 60, b);
  CHECK(x.neighbors == y.neighbors);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(x.positions[i].x == y.positions[i].x);
    CHECK(x.positions[i].y == y.positions[i].y);
    CHECK(x.positions[i].x >= 0);
    CHECK(x.positions[i].x <= 500);
  }
  Rng c(8);
  CHECK(build_random(50, 500, 60, c).neighbors != x.neighbors);
}

TEST_CASE("a radius spanning the square gives a complete graph")
{
  Rng rng(3);
  const Topology t = build_random(12, 100, 100 * std::sqrt(2.0), rng);
  CHECK(t.directed_pairs() == 12 * 11);
}

TEST_CASE("interior degree matches the disc-area expectation")
{
  // A node at least r from every edge sees the full disc, so each of the
  // other N-1 nodes lands in it with probability pi r^2 / l^2.
  const int n = 50;
  const double l = 500;
  const double r = 60;
  const double expected = (n - 1) * std::numbers::pi * r * r / (l * l);
  double sum = 0;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(derive_seed(1234, seed));
    const Topology t = build_random(n, l, r, rng);
    for (NodeId i = 0; i < t.size(); ++i) {
      const Point p = t.positions[i];
      if (p.x >= r && p.x <= l - r && p.y >= r && p.y <= l - r) {
        sum += static_cast<double>(t.neighbors[i].size());
        ++count;
      }
    }
  }
  REQUIRE(count > 1000);
  CHECK(sum / count == doctest::Approx(expected).epsilon(0.10));
}

TEST_CASE("offered traffic counts every directed in-range pair")
{
  TrafficParams tr;
  CHECK(offered_traffic(build_grid(3, 100), tr) == doctest::Approx(20e6));

  TrafficParams idle = tr;
  idle.t_off = 1e12;
  CHECK(offered_traffic(build_grid(3, 100), idle) < 1e-3);

  Rng rng(1);
  const Topology full = build_random(7, 10, 100, rng);
  CHECK(full.directed_pairs() == 7 * 6);
  CHECK(offered_traffic(full, tr) == doctest::Approx(1e6 * 42 * 0.5));
}

TEST_CASE("Jain index")
{
  CHECK(jain_index({4, 4, 4, 4}) == doctest::Approx(1.0));
  CHECK(jain_index({9, 0, 0}) == doctest::Approx(1.0 / 3));
  CHECK(jain_index({1, 2, 3}) == doctest::Approx(36.0 / 42));
  CHECK(jain_index({0, 0}) == 1.0);
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> p(1 + rng.below(20));
    for (double& v : p) {
      v = static_cast<double>(rng.below(50));
    }
    const double j = jain_index(p);
    CHECK(j >= 1.0 / static_cast<double>(p.size()) - 1e-12);
    CHECK(j <= 1.0 + 1e-12);
  }
}

TEST_CASE("modulation order covers the node count or fails loudly")
{
  CHECK(modulation_order_for(26, 52, 0) == 1);
  CHECK(modulation_order_for(27, 52, 0) == 2);
  CHECK(modulation_order_for(60, 52, 0) == 4);
  CHECK(modulation_order_for(100, 52, 4) == 4);
  try {
    modulation_order_for(60, 52, 1);
    FAIL("expected CapacityExceeded");
  } catch (const ConfigError& e) {
    CHECK(e.code() == ConfigErrc::CapacityExceeded);
  }
}
