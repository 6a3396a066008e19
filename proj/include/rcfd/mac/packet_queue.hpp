// Per-node transmit queue.
//
// Packets stay queued, in creation order, until their fate is settled. An
// attempt marks a packet in flight without moving it, so a failed
// full-duplex reply falls back to its creation-order position for free.

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "rcfd/mac/frame.hpp"

namespace rcfd::mac {

enum class PacketFate : std::uint8_t { Acked, RetryLimit, QueueOverflow, AgeLimit };

const char* to_string(PacketFate fate);

/// Which queued packets may ride along as a full-duplex reply.
enum class FdPairingRule : std::uint8_t { HeadOnly, FullQueue };

class PacketQueue {
public:
  /// Receives every packet leaving the queue with its fate and time.
  using Sink = std::function<void(const Packet&, PacketFate, TimeNs)>;

  PacketQueue(std::size_t capacity, TimeNs max_age, int max_attempts, std::size_t neighbors_hint = 0);

  void set_sink(Sink sink) { sink_ = std::move(sink); }

  /// Appends a new packet. A full queue drops the newcomer. Returns false on
  /// overflow.
  bool push(const Packet& p, TimeNs now);

  /// Discards packets older than the age limit that are not in flight. The
  /// recorded discard time is the instant the limit was crossed.
  void expire(TimeNs now);

  /// First packet not in flight, after expiry.
  const Packet* head(TimeNs now);

  /// Oldest packet for dst under the pairing rule, skipping packets in
  /// flight, after expiry.
  const Packet* find_for(NodeId dst, FdPairingRule rule, TimeNs now);

  /// True when some queued packet not in flight is addressed to dst.
  bool has_for(NodeId dst) const;

  Packet* get(std::uint64_t id);
  void set_in_flight(std::uint64_t id, bool on);

  /// Removes an acknowledged packet.
  void acked(std::uint64_t id, TimeNs now);

  /// Counts a failed attempt. Drops the packet once the attempt limit is
  /// reached and returns true in that case.
  bool failed(std::uint64_t id, TimeNs now);

  /// Removes a packet with the given fate.
  void remove(std::uint64_t id, PacketFate fate, TimeNs now);

  std::size_t size() const { return q_.size(); }
  bool empty() const { return q_.empty(); }
  const std::deque<Packet>& packets() const { return q_; }
  std::size_t in_flight_count() const;

private:
  std::deque<Packet>::iterator locate(std::uint64_t id);
  void count_dst(NodeId dst, int delta);

  std::size_t capacity_;
  TimeNs max_age_;
  int max_attempts_;
  std::deque<Packet> q_;
  /// Queued, not-in-flight packets per destination.
  std::vector<int> per_dst_;
  Sink sink_;
};

} // namespace rcfd::mac
