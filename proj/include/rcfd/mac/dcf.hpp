// 802.11 DCF in basic and RTS/CTS access, and the FD MAC built on it.
//
// Backoff never runs per slot: a countdown is one timer, and freezing it
// converts the elapsed idle time back into remaining slots.

#pragma once

#include <optional>
#include <vector>

#include "rcfd/mac/backoff.hpp"
#include "rcfd/mac/mac.hpp"

namespace rcfd::mac {

enum class DcfMode : std::uint8_t {
  Basic,
  RtsCts,
  /// RTS/CTS where the RTS receiver may answer with its own data frame.
  FullDuplex,
};

struct FdResponse {
  /// The CTS is always sent.
  bool cts = true;
  /// Packet sent back to the RTS sender together with its data.
  std::optional<std::uint64_t> data;
};

/// Reply of an FD MAC node to an RTS addressed to it.
FdResponse fdmac_on_rts(PacketQueue& queue, NodeId rts_sender, FdPairingRule rule, TimeNs now);

class DcfMac : public Mac {
public:
  enum class Phase : std::uint8_t { Idle, Backoff, SendRts, WaitCts, SendData, WaitAck };

  DcfMac(MacContext& ctx, DcfMode mode, FdPairingRule pairing = FdPairingRule::FullQueue);

  void on_enqueue() override;
  void on_channel_busy() override;
  void on_channel_idle() override;
  void on_receive(const Frame& frame) override;
  void on_receive_error() override;
  void on_tx_end(const Frame& frame) override;
  void on_timer(int tag, std::uint64_t id) override;

  Phase phase() const { return phase_; }
  const BackoffState& backoff() const { return backoff_; }
  TimeNs nav_until() const { return nav_until_; }

private:
  enum Tag : int {
    kBackoffDone,
    kNavEnd,
    kCtsTimeout,
    kAckTimeout,
    kSendData,
    kSendCts,
    kSendSecondary,
    kSendAck,
    kSecondaryAckTimeout,
  };

  void start_attempt();
  void try_resume();
  void freeze();
  void begin_transmission();
  void attempt_failed();
  void attempt_succeeded();
  void send_data(std::uint64_t packet, bool secondary);
  bool in_own_exchange() const;

  DcfMode mode_;
  FdPairingRule pairing_;
  Phase phase_ = Phase::Idle;
  BackoffState backoff_;
  std::uint64_t backoff_timer_ = 0;
  TimeNs countdown_start_ = 0;
  std::uint64_t nav_timer_ = 0;
  TimeNs nav_until_ = 0;
  bool eifs_ = false; // last frame heard was undecodable

  /// Own attempt.
  std::uint64_t current_ = 0;
  NodeId current_dst_ = 0;
  std::uint64_t timeout_ = 0;

  /// Responder side.
  std::uint64_t cts_timer_ = 0;
  NodeId cts_to_ = 0;
  std::optional<std::uint64_t> secondary_;
  NodeId secondary_dst_ = 0;
  std::uint64_t secondary_timeout_ = 0;
  struct PendingAck {
    std::uint64_t timer;
    NodeId dst;
  };
  std::vector<PendingAck> acks_;
};

} // namespace rcfd::mac
