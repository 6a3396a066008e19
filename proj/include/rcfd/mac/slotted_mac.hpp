// Data exchange shared by the frequency-domain contention schemes.
//
// Contention itself is decided by a coordinator; this class carries out
// what it decides: send the primary or the full-duplex reply at the data
// start, acknowledge received data, honor NAV, and settle each packet on
// ACK or timeout. Retries re-enter contention with no backoff.

#pragma once

#include <optional>
#include <vector>

#include "rcfd/mac/mac.hpp"

namespace rcfd::mac {

class SlottedMac : public Mac {
public:
  explicit SlottedMac(MacContext& ctx) : Mac(ctx) {}

  void on_enqueue() override;
  void on_receive(const Frame& frame) override;
  void on_tx_end(const Frame& frame) override;
  void on_timer(int tag, std::uint64_t id) override;

  /// Channel idle over [g - scan, g) and NAV clear at g.
  bool sensed_free(TimeNs g, TimeNs scan) const;

  /// Sending, waiting for an ACK, owing an ACK or expecting data.
  bool in_exchange(TimeNs g) const;

  /// Oldest packet not in flight.
  const Packet* head(TimeNs now) { return ctx_.queue().head(now); }

  /// Reserves the head packet and sends it at t0.
  void schedule_primary(TimeNs t0);

  /// Reserves the oldest packet for dst under the rule and sends it at t0.
  /// Returns false when none qualifies.
  bool schedule_secondary(TimeNs t0, NodeId dst, FdPairingRule rule);

  /// Blocks contention while data from a peer may still arrive.
  void expect_data(NodeId from, TimeNs until);

  TimeNs nav_until() const { return nav_until_; }

protected:
  /// Called for every decoded ACK, whoever it is addressed to.
  virtual void on_ack_heard(NodeId) {}

  /// Whether an ACK owed to a node outside the current exchange may go out.
  virtual bool ack_allowed(NodeId) { return true; }

  /// The peer of an exchange this node is part of.
  bool is_partner(NodeId n) const;

private:
  enum Tag : int { kSendPrimary, kSendSecondary, kPrimaryTimeout, kSecondaryTimeout, kSendAck };

  struct Attempt {
    std::uint64_t packet = 0;
    NodeId dst = 0;
    std::uint64_t timer = 0;
    bool on_air = false;
  };

  void send(Attempt& a, bool secondary);
  void settle(std::optional<Attempt>& a, bool success);

  std::optional<Attempt> primary_;
  std::optional<Attempt> secondary_;
  TimeNs nav_until_ = 0;
  TimeNs expect_until_ = 0;
  NodeId expect_from_ = 0;
  struct PendingAck {
    std::uint64_t timer;
    NodeId dst;
    /// The data came from the peer of an exchange this node joined.
    bool partner;
  };
  std::vector<PendingAck> acks_;
};

} // namespace rcfd::mac
