// RCFD channel access: three frequency-domain rounds (contention, RTS, CTS)
// at synchronized grid points, then primary and full-duplex data.

#pragma once

#include <vector>

#include "rcfd/core/contention.hpp"
#include "rcfd/core/deferral.hpp"
#include "rcfd/mac/slotted_mac.hpp"

namespace rcfd::mac {

class RcfdMac : public SlottedMac {
public:
  explicit RcfdMac(MacContext& ctx) : SlottedMac(ctx) {}

  /// Drops expired deferrals and reports whether any remain at g.
  bool deferred(TimeNs g);

  /// Defers after hearing a CTS from source, until its ACK or the timeout.
  void defer(NodeId source, TimeNs now, TimeNs timeout);

  const core::DeferState& defer_state() const { return defer_; }

protected:
  void on_ack_heard(NodeId src) override;
  /// A deferred node answers only the peer of its own exchange.
  bool ack_allowed(NodeId dst) override;

private:
  core::DeferState defer_;
};

struct RcfdCounters {
  std::uint64_t contentions = 0;
  std::uint64_t primaries = 0;
  std::uint64_t secondaries = 0;
  std::uint64_t held = 0;
};

class RcfdCoordinator : public ContentionCoordinator {
public:
  RcfdCoordinator(std::vector<RcfdMac*> macs, std::vector<std::vector<NodeId>> neighbors,
                  const TimingsNs& timings, core::SubcarrierMap map,
                  FdPairingRule pairing = FdPairingRule::FullQueue);

  TimeNs period() const override { return 3 * timings_.round; }
  bool on_grid(TimeNs g) override;

  const RcfdCounters& counters() const { return counters_; }
  const core::SubcarrierMap& map() const { return map_; }

private:
  void reset_touched();
  void mark_data_start(NodeId i, TimeNs t0);

  std::vector<RcfdMac*> macs_;
  std::vector<std::vector<NodeId>> neighbors_;
  TimingsNs timings_;
  core::SubcarrierMap map_;
  FdPairingRule pairing_;
  RcfdCounters counters_;

  // Scratch reused across contentions.
  std::vector<core::ContentionObservation> obs_;
  std::vector<core::NodeRole> role_;
  std::vector<std::uint8_t> contender_;
  std::vector<std::uint8_t> touched_;
  std::vector<NodeId> touched_list_;
  std::vector<core::Slot> pick_;
  std::vector<NodeId> dest_;
  std::vector<NodeId> recipient_;
  std::vector<std::vector<NodeId>> cts_heard_;
  /// Latest scheduled data start among each node's neighbors.
  std::vector<TimeNs> data_start_;
};

} // namespace rcfd::mac
