#include "doctest.h"
#include "rcfd/common/rng.hpp"
#include "rcfd/verify/oracles.hpp"

using namespace rcfd;
using namespace rcfd::core;

TEST_CASE("exhaustive small networks: no destination receives two transmissions")
{
  const verify::EnumerationStats st = verify::enumerate_rcfd(4, 8);
  MESSAGE("configurations: " << st.configurations
                             << ", receiver interference: " << st.receiver_interference);
  CHECK(st.topologies == 2 + 8 + 64);
  CHECK(st.configurations > 1000000);
  CHECK(st.destination_conflicts == 0);
  CHECK(st.pairing_violations == 0);
  CHECK(st.role_violations == 0);
}

namespace {

using Neighbors = std::vector<std::vector<NodeId>>;

Neighbors random_graph(int n, Rng& rng)
{
  Neighbors nb(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (rng.bernoulli(0.6)) {
        nb[a].push_back(b);
        nb[b].push_back(a);
      }
    }
  }
  return nb;
}

std::vector<SlotParticipant> random_intents(const Neighbors& nb, const SubcarrierMap& map,
                                            Rng& rng)
{
  std::vector<SlotParticipant> p(nb.size());
  for (std::size_t i = 0; i < nb.size(); ++i) {
    if (!nb[i].empty() && rng.bernoulli(0.7)) {
      const NodeId d = nb[i][rng.below(nb[i].size())];
      p[i].intent = d;
      p[i].queued_for = {d};
      p[i].pick = round1_pick(map, rng);
    }
  }
  return p;
}

} // namespace

TEST_CASE("missed detections in round 1 only cost opportunities")
{
  const SubcarrierMap map = default_mapping(4, 8, 1);
  Rng rng(11);
  int mutated = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const Neighbors nb = random_graph(4, rng);
    const auto p = random_intents(nb, map, rng);
    const std::uint64_t mask_seed = rng();
    // Each foreign round-1 symbol is missed with probability 1/3.
    const MissedDetection missed = [mask_seed](NodeId at, NodeId from, int round, Slot s) {
      if (round != 1) {
        return false;
      }
      const std::uint64_t h =
        derive_seed(mask_seed, (static_cast<std::uint64_t>(at) << 40) ^
                                 (static_cast<std::uint64_t>(from) << 32) ^
                                 (static_cast<std::uint64_t>(round) << 24) ^
                                 (s.subcarrier << 8) ^ s.value);
      return h % 3 == 0;
    };
    const auto res = resolve_contention(nb, p, map, missed);
    ++mutated;
    CHECK(verify::count_conflicts(nb, res).destination == 0);
  }
  CHECK(mutated == 20000);
}

TEST_CASE("missed RTS symbols can pair two secondaries on one primary")
{
  // Chain n1 - n0 - n2 - n3.
  const SubcarrierMap map = default_mapping(4, 8, 1);
  const Neighbors nb = {{1, 2}, {0}, {0, 3}, {2}};
  std::vector<SlotParticipant> p(4);
  const NodeId dest[] = {2, 0, 3, 2};
  const std::uint32_t pick[] = {3, 1, 3, 7};
  for (NodeId i = 0; i < 4; ++i) {
    p[i].intent = dest[i];
    p[i].queued_for = {dest[i]};
    p[i].pick = Slot{pick[i], 0};
  }
  CHECK(verify::count_conflicts(nb, resolve_contention(nb, p, map)).destination == 0);

  // n0 misses f1 of n1 and the f2 half of the RTS from n2 to n3.
  const MissedDetection missed = [&](NodeId at, NodeId from, int round, Slot s) {
    return round == 2 && at == 0 &&
           ((from == 1 && s == map.f1(1)) || (from == 2 && s == map.f2(3)));
  };
  const auto faded = resolve_contention(nb, p, map, missed);
  CHECK(faded[2].decision == TxDecision::primary(3));
  CHECK(faded[3].decision == TxDecision::secondary(2));
  CHECK(faded[0].decision == TxDecision::secondary(2));
  CHECK(verify::count_conflicts(nb, faded).destination > 0);
}

TEST_CASE("a missed CTS symbol at a primary transmitter can clear a colliding transmission")
{
  // n1 -> n3 and n2 -> n4; n2 is in range of n3 and n4, n1 only of n3.
  const SubcarrierMap map = default_mapping(4, 8, 1);
  const Neighbors nb = {{2}, {2, 3}, {0, 1}, {1}};
  std::vector<SlotParticipant> p(4);
  p[0].intent = 2;
  p[0].pick = Slot{0, 0};
  p[1].intent = 3;
  p[1].pick = Slot{1, 0};
  const auto ideal = resolve_contention(nb, p, map);
  CHECK(ideal[0].decision == TxDecision::primary(2));
  CHECK(ideal[1].decision == TxDecision::hold());
  CHECK(verify::count_conflicts(nb, ideal).destination == 0);

  // n2 misses the f2 half of the CTS that n3 sends to n1.
  const MissedDetection missed = [&](NodeId at, NodeId from, int round, Slot s) {
    return at == 1 && from == 2 && round == 3 && s == map.f2(0);
  };
  const auto faded = resolve_contention(nb, p, map, missed);
  CHECK(faded[1].decision == TxDecision::primary(3));
  // n2 now transmits within range of n3 while n3 receives from n1.
  CHECK(verify::count_conflicts(nb, faded).interference > 0);
}
