// Interface between a node's MAC and the simulation engine.
//
// The engine owns time, the medium and the queues. A MAC reacts to
// callbacks and acts through its context; it never sees other nodes except
// through the frames it decodes. The synchronized frequency-domain schemes
// add a coordinator that evaluates the contention rounds of all nodes at
// once, since symbol detection is ideal and instantaneous by assumption.

#pragma once

#include <cstdint>

#include "rcfd/common/rng.hpp"
#include "rcfd/mac/frame.hpp"
#include "rcfd/mac/packet_queue.hpp"

namespace rcfd::mac {

class MacContext {
public:
  virtual ~MacContext() = default;

  virtual NodeId self() const = 0;
  virtual TimeNs now() const = 0;
  virtual Rng& rng() = 0;
  virtual const TimingsNs& timings() const = 0;
  virtual PacketQueue& queue() = 0;

  /// Puts a frame on the air now. A node sends one frame at a time.
  virtual void transmit(const Frame& frame) = 0;
  virtual bool transmitting() const = 0;

  /// Schedules on_timer(tag, id) at the given time and returns id.
  virtual std::uint64_t set_timer(TimeNs at, int tag) = 0;

  /// True when no frame energy reaches the node and it is not sending.
  virtual bool channel_idle() const = 0;

  /// Time since which the channel has been idle, counting frames and
  /// contention symbols. Meaningful only when channel_idle() holds.
  virtual TimeNs idle_since() const = 0;

  /// Time since which no frame energy has reached the node. Ignores
  /// contention symbols.
  virtual TimeNs frame_idle_since() const = 0;

  /// Marks contention-symbol energy at this node until the given time.
  virtual void sense_contention(TimeNs until) = 0;

  /// Asks the engine to run the contention coordinator at the next grid
  /// point. Only meaningful for the synchronized schemes.
  virtual void request_contention() {}
};

class Mac {
public:
  explicit Mac(MacContext& ctx) : ctx_(ctx) {}
  virtual ~Mac() = default;
  Mac(const Mac&) = delete;
  Mac& operator=(const Mac&) = delete;

  /// A packet entered the queue.
  virtual void on_enqueue() {}
  /// Frame energy appeared or the channel otherwise turned busy.
  virtual void on_channel_busy() {}
  /// The channel turned idle.
  virtual void on_channel_idle() {}
  /// A frame was decoded, whether addressed here or overheard.
  virtual void on_receive(const Frame& frame) = 0;
  /// A frame ended that could not be decoded.
  virtual void on_receive_error() {}
  /// The node finished sending a frame.
  virtual void on_tx_end(const Frame& frame) = 0;
  virtual void on_timer(int tag, std::uint64_t id) = 0;

  MacContext& ctx() { return ctx_; }
  const MacContext& ctx() const { return ctx_; }

protected:
  MacContext& ctx_;
};

/// Runs the synchronized contention rounds of every node at grid points.
class ContentionCoordinator {
public:
  virtual ~ContentionCoordinator() = default;

  /// Spacing of contention opportunities: the length of all rounds.
  virtual TimeNs period() const = 0;

  /// Evaluates one contention at grid time g. Returns true while some node
  /// still has traffic, so the engine keeps the grid running.
  virtual bool on_grid(TimeNs g) = 0;
};

} // namespace rcfd::mac
