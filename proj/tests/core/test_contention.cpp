#include <algorithm>

#include "core/slots.hpp"
#include "doctest.h"
#include "rcfd/core/contention.hpp"

using namespace rcfd;
using namespace rcfd::core;
using rcfd::test::n;
using rcfd::test::s;

namespace {

using Neighbors = std::vector<std::vector<NodeId>>;

// n1 - n2 - n3 with n1 and n3 out of range of each other.
Neighbors line3() { return {{n(2)}, {n(1), n(3)}, {n(2)}}; }

SlotParticipant contender(NodeId dest, Slot pick)
{
  SlotParticipant p;
  p.intent = dest;
  p.pick = pick;
  p.queued_for = {dest};
  return p;
}

} // namespace

TEST_CASE("elect_pt compares the own draw against everything heard")
{
  ContentionObservation obs;
  obs.round1_heard = {s(4)};
  CHECK(elect_pt(s(4), obs));

  obs.round1_heard = {s(2), s(6)};
  CHECK_FALSE(elect_pt(s(6), obs));
  CHECK(elect_pt(s(2), obs));

  // Two nodes that picked s2 both see themselves as the minimum.
  obs.round1_heard = SlotSet{s(2), s(2)};
  CHECK(obs.round1_heard.size() == 1);
  CHECK(elect_pt(s(2), obs));

  obs.round1_heard = {s(3)};
  CHECK_THROWS_AS(elect_pt(s(1), obs), CoreError);
}

TEST_CASE("slot order is subcarrier first, then symbol value")
{
  CHECK(s(1, 3) < s(2, 0));
  CHECK(s(2, 1) < s(2, 2));
  // Brute force over all pairs in a 4x4 grid of slots.
  for (std::uint32_t a = 1; a <= 4; ++a) {
    for (std::uint32_t va = 0; va < 4; ++va) {
      for (std::uint32_t b = 1; b <= 4; ++b) {
        for (std::uint32_t vb = 0; vb < 4; ++vb) {
          const bool expected = a < b || (a == b && va < vb);
          CHECK((s(a, va) < s(b, vb)) == expected);
        }
      }
    }
  }
}

TEST_CASE("round2_emission is the RTS pair")
{
  const SubcarrierMap map = default_mapping(3, 6, 1);
  auto e = round2_emission(n(1), n(2), map);
  CHECK(e[0] == s(1));
  CHECK(e[1] == s(5));
  e = round2_emission(n(3), n(2), map);
  CHECK(e[0] == s(3));
  CHECK(e[1] == s(5));

  const SubcarrierMap ext = default_mapping(8, 4, 4);
  e = round2_emission(n(1), n(6), ext);
  CHECK(e[0] == s(1, 0));
  CHECK(e[1] == s(4, 1));

  CHECK_THROWS_AS(round2_emission(n(1), n(9), ext), CoreError);
}

TEST_CASE("elect_rr requires the own f2 slot and excludes primary transmitters")
{
  const SubcarrierMap map = default_mapping(4, 8, 1);
  ContentionObservation obs;
  obs.round2_heard_set2 = {map.f2(n(2))};
  CHECK(elect_rr(n(2), false, obs, map));
  CHECK_FALSE(elect_rr(n(2), true, obs, map));
  CHECK_FALSE(elect_rr(n(4), false, obs, map));

  const SubcarrierMap map6 = default_mapping(3, 6, 1);
  obs.round2_heard_set2 = {s(5)};
  CHECK(elect_rr(n(2), false, obs, map6));
}

TEST_CASE("select_cts_recipient picks the lowest requester")
{
  const SubcarrierMap map = default_mapping(3, 6, 1);
  ContentionObservation obs;
  obs.round2_heard_set1 = {s(1), s(3)};
  CHECK(select_cts_recipient(obs, map) == n(1));
  obs.round2_heard_set1 = {s(3)};
  CHECK(select_cts_recipient(obs, map) == n(3));

  const SubcarrierMap ext = default_mapping(8, 4, 4);
  obs.round2_heard_set1 = {s(2, 2), s(2, 1)};
  CHECK(select_cts_recipient(obs, ext) == *ext.node_of_f1(s(2, 1)));
  CHECK(select_cts_recipient(obs, ext) == n(6));

  obs.round2_heard_set1.clear();
  CHECK_THROWS_AS(select_cts_recipient(obs, map), CoreError);
}

TEST_CASE("round3_emission is the CTS pair")
{
  const SubcarrierMap map = default_mapping(3, 6, 1);
  auto e = round3_emission(n(2), n(1), map);
  CHECK(e[0] == s(2));
  CHECK(e[1] == s(4));
  const SubcarrierMap map8 = default_mapping(4, 8, 1);
  e = round3_emission(n(4), n(3), map8);
  CHECK(e[0] == s(4));
  CHECK(e[1] == s(7));
}

TEST_CASE("decide_transmission applies the clearance rules")
{
  const SubcarrierMap map = default_mapping(3, 6, 1);
  ContentionObservation obs;
  obs.round3_heard_set1 = {s(2)};
  obs.round3_heard_set2 = {s(4)};
  CHECK(decide_transmission(n(1), NodeRole::PrimaryTransmitter, n(2), obs, map) ==
        TxDecision::primary(n(2)));
  CHECK(decide_transmission(n(3), NodeRole::PrimaryTransmitter, n(2), obs, map) ==
        TxDecision::hold());
  CHECK(decide_transmission(n(1), NodeRole::Bystander, n(2), obs, map) == TxDecision::hold());
  CHECK(decide_transmission(n(1), NodeRole::Idle, n(2), obs, map) == TxDecision::hold());

  ContentionObservation rr;
  rr.round2_heard_set1 = {s(1)};
  rr.round3_heard_set1 = {s(2)};
  CHECK(decide_transmission(n(2), NodeRole::RtsReceiver, n(1), rr, map) ==
        TxDecision::secondary(n(1)));
  rr.round2_heard_set1 = {s(1), s(3)};
  CHECK(decide_transmission(n(2), NodeRole::RtsReceiver, n(1), rr, map) == TxDecision::hold());
}

TEST_CASE("scenario 1: the hidden terminal is resolved")
{
  const SubcarrierMap map = default_mapping(3, 6, 1);
  std::vector<SlotParticipant> p(3);
  p[n(1)] = contender(n(2), s(4));
  p[n(3)] = contender(n(2), s(5));
  const auto r = resolve_contention(line3(), p, map);

  CHECK(r[n(1)].role == NodeRole::PrimaryTransmitter);
  CHECK(r[n(3)].role == NodeRole::PrimaryTransmitter);
  CHECK(r[n(2)].obs.round2_heard_set1 == SlotSet{s(1), s(3)});
  CHECK(r[n(2)].obs.round2_heard_set2 == SlotSet{s(5)});
  CHECK(r[n(2)].role == NodeRole::RtsReceiver);
  CHECK(r[n(2)].cts_recipient == n(1));
  CHECK(r[n(3)].obs.round3_heard_set2 == SlotSet{s(4)});
  CHECK(r[n(1)].decision == TxDecision::primary(n(2)));
  CHECK(r[n(3)].decision == TxDecision::hold());
  CHECK(r[n(2)].decision == TxDecision::hold());
}

TEST_CASE("scenario 2: a full-duplex pair is established")
{
  const SubcarrierMap map = default_mapping(3, 6, 1);
  std::vector<SlotParticipant> p(3);
  p[n(1)] = contender(n(2), s(2));
  p[n(2)] = contender(n(1), s(6));
  const auto r = resolve_contention(line3(), p, map);

  CHECK(r[n(1)].role == NodeRole::PrimaryTransmitter);
  CHECK(r[n(2)].role == NodeRole::RtsReceiver);
  CHECK(r[n(2)].obs.round2_heard_set1 == SlotSet{s(1)});
  CHECK(r[n(2)].obs.round3_heard_set1 == SlotSet{s(2)});
  CHECK(r[n(1)].obs.round3_heard_set1 == SlotSet{s(2)});
  CHECK(r[n(1)].obs.round3_heard_set2 == SlotSet{s(4)});
  CHECK(r[n(1)].decision == TxDecision::primary(n(2)));
  CHECK(r[n(2)].decision == TxDecision::secondary(n(1)));
  CHECK(r[n(3)].decision == TxDecision::hold());
  CHECK(r[n(3)].heard_foreign_cts);

  // Swapping the draws swaps the roles and keeps the pair.
  p[n(1)].pick = s(6);
  p[n(2)].pick = s(2);
  const auto q = resolve_contention(line3(), p, map);
  CHECK(q[n(2)].decision == TxDecision::primary(n(1)));
  CHECK(q[n(1)].decision == TxDecision::secondary(n(2)));
}

TEST_CASE("two primaries on the same slot: only the one named by the CTS transmits")
{
  const SubcarrierMap map = default_mapping(4, 8, 1);
  const Neighbors full = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  std::vector<SlotParticipant> p(4);
  p[n(1)] = contender(n(2), s(2));
  p[n(3)] = contender(n(4), s(2));
  const auto r = resolve_contention(full, p, map);
  CHECK(r[n(1)].role == NodeRole::PrimaryTransmitter);
  CHECK(r[n(3)].role == NodeRole::PrimaryTransmitter);
  CHECK(r[n(1)].decision == TxDecision::primary(n(2)));
  CHECK(r[n(3)].decision == TxDecision::hold());
  CHECK(r[n(2)].decision == TxDecision::hold());
  CHECK(r[n(4)].decision == TxDecision::hold());
}

TEST_CASE("roles are exclusive and decisions deterministic")
{
  const SubcarrierMap map = default_mapping(4, 8, 1);
  const Neighbors full = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  Rng rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<SlotParticipant> p(4);
    for (NodeId i = 0; i < 4; ++i) {
      if (rng.bernoulli(0.6)) {
        NodeId d = static_cast<NodeId>(rng.below(3));
        d = d >= i ? d + 1 : d;
        p[i] = contender(d, round1_pick(map, rng));
      }
    }
    const auto a = resolve_contention(full, p, map);
    const auto b = resolve_contention(full, p, map);
    for (NodeId i = 0; i < 4; ++i) {
      const bool pt = a[i].role == NodeRole::PrimaryTransmitter;
      const bool rr = a[i].role == NodeRole::RtsReceiver;
      CHECK_FALSE((pt && rr));
      CHECK(a[i].decision == b[i].decision);
      if (a[i].decision.kind == TxDecision::Kind::TransmitSecondaryFD) {
        CHECK(rr);
      }
    }
  }
}
