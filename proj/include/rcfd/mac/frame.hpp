// Frames, packets and integer timing constants shared by every MAC.

#pragma once

#include <cstdint>

#include "rcfd/analytic/phy_timings.hpp"
#include "rcfd/common/time.hpp"
#include "rcfd/core/types.hpp"

namespace rcfd::mac {

using core::NodeId;

enum class FrameKind : std::uint8_t { Data, Ack, Rts, Cts };

const char* to_string(FrameKind kind);

/// A full-channel transmission.
struct Frame {
  FrameKind kind = FrameKind::Data;
  NodeId src = 0;
  NodeId dst = 0;
  TimeNs airtime = 0;
  /// Virtual carrier sense reservation past the end of the frame.
  TimeNs nav = 0;
  /// Carried packet, data frames only.
  std::uint64_t packet = 0;
  /// Data sent by the receiver of an exchange back to its initiator.
  bool secondary = false;
};

struct Packet {
  std::uint64_t id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  TimeNs created = 0;
  /// Failed transmission attempts so far.
  int attempts = 0;
  /// Set while an attempt is on the air or waiting for its ACK.
  bool in_flight = false;
};

/// Protocol timings in nanoseconds. Data airtime is fixed per run since all
/// packets share one length and rate.
struct TimingsNs {
  TimeNs ack = 0;
  TimeNs rts = 0;
  TimeNs cts = 0;
  TimeNs sifs = 0;
  TimeNs difs = 0;
  TimeNs prop = 0;
  TimeNs slot = 0;
  TimeNs round = 0;
  TimeNs scan = 0;
  TimeNs header = 0;
  TimeNs data = 0;
  int w_initial = 16;
  int stage_cap = 6;
  int subcarriers = 52;

  static TimingsNs from(const analytic::PhyTimings& t, double t_data_us);
};

} // namespace rcfd::mac
