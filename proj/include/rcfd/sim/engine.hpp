// Discrete-event simulation of one network under one MAC protocol.
//
// Channel contract: a frame occupies the channel for its airtime at the
// sender and, one propagation delay later, at the sender itself and every
// in-range node. Any two overlapping arrivals at a node corrupt each other.
// Half-duplex nodes also lose whatever arrives while they send; full-duplex
// nodes cancel their own signal perfectly. Data frames that survive are
// erased with probability loss_p, independently per receiver. Contention
// symbols are ideal and reach nodes only as energy for carrier sense.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "rcfd/mac/frame.hpp"
#include "rcfd/mac/mac.hpp"
#include "rcfd/sim/config.hpp"
#include "rcfd/sim/topology.hpp"

namespace rcfd::sim {

struct FrameEvent {
  enum class Type : std::uint8_t { TxStart, Decoded, Collided, Erased };

  Type type = Type::TxStart;
  TimeNs time = 0;
  /// Sender for TxStart, receiver otherwise.
  NodeId at = 0;
  mac::Frame frame;
};

using FrameObserver = std::function<void(const FrameEvent&)>;

/// Packet accounting at the end of a run, per node.
struct NodeTally {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t discarded = 0;
  /// Still queued and never delivered.
  std::uint64_t queued = 0;
  std::uint64_t in_flight = 0;
};

/// Rates and averages cover the measurement window; the frame counters
/// and tallies cover the whole run.
struct SimMetrics {
  /// Delivered payload bits / T / G. Zero in saturated mode.
  double gamma = 0;
  /// Delivered payload bits / T / channel rate.
  double utilization = 0;
  /// Mean delay over delivered and discarded packets, seconds.
  double delta_s = 0;
  /// Mean delay over delivered packets only.
  double delay_delivered_s = 0;
  double max_delay_s = 0;
  /// Jain index over per-source delivered counts of nodes with neighbors.
  double jain = 1;
  double offered_bps = 0;
  double delivered_bits = 0;

  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t discarded_retry = 0;
  std::uint64_t discarded_overflow = 0;
  std::uint64_t discarded_age = 0;

  std::uint64_t data_frames = 0;
  /// Data frames lost at their in-range destination to an overlap.
  std::uint64_t data_collisions = 0;
  /// The part of data_collisions hitting full-duplex replies.
  std::uint64_t secondary_collisions = 0;
  std::uint64_t erasures = 0;
  std::uint64_t contentions = 0;
  std::uint64_t events = 0;

  std::vector<std::uint64_t> delivered_per_node;
  std::vector<NodeTally> tally;
};

/// Builds the MAC of one node. Lets tests drive the channel directly.
using MacFactory = std::function<std::unique_ptr<mac::Mac>(mac::MacContext&)>;

class Engine {
public:
  /// Throws ConfigError for invalid or inconsistent settings.
  Engine(Topology topo, SimConfig cfg);

  /// Runs custom MACs without a contention coordinator or generated
  /// traffic. The protocol in cfg still selects half or full duplex.
  Engine(Topology topo, SimConfig cfg, MacFactory factory);
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  void set_frame_observer(FrameObserver observer);

  /// Runs transient plus measurement window. Call once.
  SimMetrics run();

  const Topology& topology() const;
  const mac::TimingsNs& timings() const;
  std::uint32_t modulation_order() const;
  mac::Mac& mac(NodeId i);
  mac::PacketQueue& queue(NodeId i);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper around Engine.
SimMetrics simulate(const Topology& topo, const SimConfig& cfg);

} // namespace rcfd::sim
