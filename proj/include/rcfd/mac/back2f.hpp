// Two-round frequency-domain backoff.
//
// Round 1: every contender signals on subcarrier myback and all subtract
// the lowest value heard. Nodes left at zero draw myback2 and signal it in
// round 2; those matching the lowest round-2 value send data. Round-1
// losers keep their residual, round-2 losers stay at zero, and senders draw
// afresh.

#pragma once

#include <vector>

#include "rcfd/mac/slotted_mac.hpp"

namespace rcfd::mac {

struct Back2fRoundState {
  enum class Phase : std::uint8_t { Scan, Round1, Round2, Transmit };

  /// -1 until the first draw.
  int myback = -1;
  int myback2 = -1;
  Phase phase = Phase::Scan;
};

/// Enters round 1, drawing myback on [0, S-1] if it has never been drawn.
void back2f_begin(Back2fRoundState& st, int subcarriers, Rng& rng);

/// Applies the lowest value heard in the current round, own value
/// included. Round 1 subtracts it and either draws myback2 or falls back to
/// Scan. Round 2 moves the lowest senders to Transmit, with a fresh myback
/// for the next contention, and everyone else to Scan.
void back2f_step(Back2fRoundState& st, int lowest_heard, int subcarriers, Rng& rng);

class Back2fMac : public SlottedMac {
public:
  explicit Back2fMac(MacContext& ctx) : SlottedMac(ctx) {}

  Back2fRoundState& rounds() { return rounds_; }
  const Back2fRoundState& rounds() const { return rounds_; }

private:
  Back2fRoundState rounds_;
};

class Back2fCoordinator : public ContentionCoordinator {
public:
  Back2fCoordinator(std::vector<Back2fMac*> macs, std::vector<std::vector<NodeId>> neighbors,
                    const TimingsNs& timings);

  TimeNs period() const override { return 2 * timings_.round; }
  bool on_grid(TimeNs g) override;

  /// Contentions held so far.
  std::uint64_t contentions() const { return contentions_; }

private:
  std::vector<Back2fMac*> macs_;
  std::vector<std::vector<NodeId>> neighbors_;
  TimingsNs timings_;
  std::vector<std::uint8_t> active_;
  std::vector<NodeId> contenders_;
  std::uint64_t contentions_ = 0;
};

} // namespace rcfd::mac
