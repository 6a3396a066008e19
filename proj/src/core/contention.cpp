#include "rcfd/core/contention.hpp"

#include <algorithm>

namespace rcfd::core {

bool elect_pt(Slot chosen, const ContentionObservation& obs)
{
  if (!obs.round1_heard.contains(chosen)) {
    throw CoreError(CoreErrc::ChosenNotHeard, "own round-1 slot missing from the heard set");
  }
  return obs.round1_heard.min() == chosen;
}

std::array<Slot, 2> round2_emission(NodeId self, NodeId dest, const SubcarrierMap& map)
{
  return {map.f1(self), map.f2(dest)};
}

bool elect_rr(NodeId self, bool is_pt, const ContentionObservation& obs, const SubcarrierMap& map)
{
  return !is_pt && obs.round2_heard_set2.contains(map.f2(self));
}

NodeId select_cts_recipient(const ContentionObservation& obs, const SubcarrierMap& map)
{
  if (obs.round2_heard_set1.empty()) {
    throw CoreError(CoreErrc::NoRtsHeard, "no RTS symbol heard in set 1");
  }
  const Slot lowest = obs.round2_heard_set1.min();
  const auto node = map.node_of_f1(lowest);
  if (!node) {
    throw CoreError(CoreErrc::UnmappedNode, "lowest RTS slot belongs to no node");
  }
  return *node;
}

std::array<Slot, 2> round3_emission(NodeId self, NodeId recipient, const SubcarrierMap& map)
{
  return {map.f1(self), map.f2(recipient)};
}

TxDecision decide_transmission(NodeId self, NodeRole role, NodeId dest,
                               const ContentionObservation& obs, const SubcarrierMap& map)
{
  if (role == NodeRole::PrimaryTransmitter) {
    const bool dest_answered = obs.round3_heard_set1.contains(map.f1(dest));
    const bool only_cts_for_me =
      obs.round3_heard_set2.size() == 1 && obs.round3_heard_set2.contains(map.f2(self));
    return dest_answered && only_cts_for_me ? TxDecision::primary(dest) : TxDecision::hold();
  }
  if (role == NodeRole::RtsReceiver) {
    const bool single_rts = obs.round2_heard_set1.size() == 1 &&
                            obs.round2_heard_set1.contains(map.f1(dest));
    const bool single_cts =
      obs.round3_heard_set1.size() == 1 && obs.round3_heard_set1.contains(map.f1(self));
    return single_rts && single_cts ? TxDecision::secondary(dest) : TxDecision::hold();
  }
  return TxDecision::hold();
}

std::vector<SlotResult> resolve_contention(const std::vector<std::vector<NodeId>>& neighbors,
                                           const std::vector<SlotParticipant>& participants,
                                           const SubcarrierMap& map,
                                           const MissedDetection& missed)
{
  const std::size_t n = participants.size();
  std::vector<SlotResult> out(n);

  // Round 1: every contender hears its own draw and those of its neighbors.
  for (NodeId i = 0; i < n; ++i) {
    if (!participants[i].intent) {
      continue;
    }
    SlotSet& heard = out[i].obs.round1_heard;
    heard.insert(participants[i].pick);
    for (NodeId v : neighbors[i]) {
      if (participants[v].intent && !(missed && missed(i, v, 1, participants[v].pick))) {
        heard.insert(participants[v].pick);
      }
    }
    if (elect_pt(participants[i].pick, out[i].obs)) {
      out[i].role = NodeRole::PrimaryTransmitter;
    } else {
      out[i].role = NodeRole::Bystander;
    }
  }

  // Round 2: primary transmitters send the RTS.
  auto hear = [](const std::array<Slot, 2>& e, SlotSet& s1, SlotSet& s2) {
    s1.insert(e[0]);
    s2.insert(e[1]);
  };
  auto hear_from = [&](NodeId at, NodeId from, int round, const std::array<Slot, 2>& e,
                       SlotSet& s1, SlotSet& s2) {
    bool any = false;
    if (!(missed && missed(at, from, round, e[0]))) {
      s1.insert(e[0]);
      any = true;
    }
    if (!(missed && missed(at, from, round, e[1]))) {
      s2.insert(e[1]);
      any = true;
    }
    return any;
  };
  std::vector<std::optional<std::array<Slot, 2>>> rts(n);
  for (NodeId i = 0; i < n; ++i) {
    if (out[i].role == NodeRole::PrimaryTransmitter) {
      rts[i] = round2_emission(i, *participants[i].intent, map);
    }
  }
  for (NodeId h = 0; h < n; ++h) {
    ContentionObservation& obs = out[h].obs;
    if (rts[h]) {
      hear(*rts[h], obs.round2_heard_set1, obs.round2_heard_set2);
    }
    for (NodeId v : neighbors[h]) {
      if (rts[v]) {
        hear_from(h, v, 2, *rts[v], obs.round2_heard_set1, obs.round2_heard_set2);
      }
    }
  }

  // Round 3: RTS receivers answer the lowest requester with a CTS.
  std::vector<std::optional<std::array<Slot, 2>>> cts(n);
  for (NodeId h = 0; h < n; ++h) {
    const bool is_pt = out[h].role == NodeRole::PrimaryTransmitter;
    const bool eligible = participants[h].intent.has_value() || participants[h].eligible;
    // A receiver that caught its f2 slot but no requester stays silent.
    if (eligible && elect_rr(h, is_pt, out[h].obs, map) &&
        !out[h].obs.round2_heard_set1.empty()) {
      out[h].role = NodeRole::RtsReceiver;
      out[h].cts_recipient = select_cts_recipient(out[h].obs, map);
      cts[h] = round3_emission(h, *out[h].cts_recipient, map);
    }
  }
  for (NodeId i = 0; i < n; ++i) {
    ContentionObservation& obs = out[i].obs;
    if (cts[i]) {
      hear(*cts[i], obs.round3_heard_set1, obs.round3_heard_set2);
    }
    for (NodeId v : neighbors[i]) {
      if (cts[v]) {
        if (hear_from(i, v, 3, *cts[v], obs.round3_heard_set1, obs.round3_heard_set2)) {
          out[i].heard_foreign_cts = true;
        }
      }
    }
  }

  // Decisions.
  for (NodeId i = 0; i < n; ++i) {
    SlotResult& r = out[i];
    if (r.role == NodeRole::PrimaryTransmitter) {
      r.decision = decide_transmission(i, r.role, *participants[i].intent, r.obs, map);
    } else if (r.role == NodeRole::RtsReceiver) {
      const NodeId peer = *r.cts_recipient;
      const auto& q = participants[i].queued_for;
      if (std::find(q.begin(), q.end(), peer) != q.end()) {
        r.decision = decide_transmission(i, r.role, peer, r.obs, map);
      }
    }
  }
  return out;
}

} // namespace rcfd::core
