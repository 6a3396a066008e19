// The three frequency-domain contention rounds and the transmit decision.
//
// Round 1 elects primary transmitters, round 2 carries the RTS, round 3 the
// CTS. Every function here is pure; callers own all state.

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "rcfd/core/subcarrier_map.hpp"
#include "rcfd/core/types.hpp"

namespace rcfd::core {

/// True when the chosen slot is the lowest slot heard in round 1.
bool elect_pt(Slot chosen, const ContentionObservation& obs);

/// RTS symbols of a primary transmitter: {f1(self), f2(dest)}.
std::array<Slot, 2> round2_emission(NodeId self, NodeId dest, const SubcarrierMap& map);

/// True when the node is not a primary transmitter and its f2 slot was heard
/// in round 2.
bool elect_rr(NodeId self, bool is_pt, const ContentionObservation& obs, const SubcarrierMap& map);

/// The requester with the lowest f1 slot among the RTS symbols heard.
NodeId select_cts_recipient(const ContentionObservation& obs, const SubcarrierMap& map);

/// CTS symbols of an RTS receiver: {f1(self), f2(recipient)}.
std::array<Slot, 2> round3_emission(NodeId self, NodeId recipient, const SubcarrierMap& map);

/// Applies the clearance rules after round 3. For a primary transmitter dest
/// is its advertised destination. For an RTS receiver dest is the node its
/// candidate full-duplex packet is addressed to.
TxDecision decide_transmission(NodeId self, NodeRole role, NodeId dest,
                               const ContentionObservation& obs, const SubcarrierMap& map);

/// Per-node input to one synchronized contention slot.
struct SlotParticipant {
  /// Destination of the head packet when the node contends.
  std::optional<NodeId> intent;
  /// Round-1 draw, meaningful only when intent is set.
  Slot pick;
  /// Listeners that may answer an RTS. Contenders are always eligible.
  bool eligible = true;
  /// Destinations of queued packets, searched for the full-duplex reply.
  std::vector<NodeId> queued_for;
};

struct SlotResult {
  NodeRole role = NodeRole::Idle;
  ContentionObservation obs;
  std::optional<NodeId> cts_recipient;
  TxDecision decision;
  /// Heard a CTS from another node. Nodes that do not transmit defer.
  bool heard_foreign_cts = false;
};

/// Returns true when node `at` fails to detect `slot` sent by `from` in the
/// given round (1, 2 or 3). Own emissions are always detected.
using MissedDetection = std::function<bool(NodeId at, NodeId from, int round, Slot slot)>;

/// Runs all three rounds for a network described by neighbor lists. Symbol
/// detection is ideal unless a MissedDetection hook is given. Used by tests
/// and enumeration oracles; the simulator runs the same operations round by
/// round.
std::vector<SlotResult> resolve_contention(const std::vector<std::vector<NodeId>>& neighbors,
                                           const std::vector<SlotParticipant>& participants,
                                           const SubcarrierMap& map,
                                           const MissedDetection& missed = nullptr);

} // namespace rcfd::core
