#include "rcfd/mac/backoff.hpp"

#include <algorithm>

namespace rcfd::mac {

int BackoffState::cw() const { return w_initial << std::min(stage, stage_cap); }

void BackoffState::draw(Rng& rng) { counter = static_cast<int>(rng.below(static_cast<std::uint64_t>(cw()))); }

void BackoffState::on_success(Rng& rng)
{
  stage = 0;
  draw(rng);
}

void BackoffState::on_failure(Rng& rng)
{
  stage = std::min(stage + 1, stage_cap);
  draw(rng);
}

int backoff_slots_elapsed(TimeNs countdown_start, TimeNs now, TimeNs slot)
{
  if (now <= countdown_start) {
    return 0;
  }
  return static_cast<int>((now - countdown_start) / slot);
}

int backoff_freeze(int counter, TimeNs countdown_start, TimeNs now, TimeNs slot)
{
  return std::max(0, counter - backoff_slots_elapsed(countdown_start, now, slot));
}

} // namespace rcfd::mac
