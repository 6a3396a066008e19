// Binary exponential backoff of 802.11 DCF.

#pragma once

#include "rcfd/common/rng.hpp"
#include "rcfd/common/time.hpp"

namespace rcfd::mac {

struct BackoffState {
  int stage = 0;
  int counter = 0;
  int w_initial = 16;
  int stage_cap = 6;

  /// Contention window W * 2^min(stage, cap).
  int cw() const;

  /// Draws the counter uniformly on [0, cw - 1].
  void draw(Rng& rng);

  /// Resets the stage and draws a new counter.
  void on_success(Rng& rng);

  /// Advances the stage up to the cap and draws a new counter.
  void on_failure(Rng& rng);
};

/// Whole idle slots counted between the start of a countdown and now.
/// Slots cut short by the channel turning busy do not count.
int backoff_slots_elapsed(TimeNs countdown_start, TimeNs now, TimeNs slot);

/// Counter left after freezing a countdown that started at countdown_start.
int backoff_freeze(int counter, TimeNs countdown_start, TimeNs now, TimeNs slot);

} // namespace rcfd::mac
