#include "rcfd/core/deferral.hpp"

#include <algorithm>

namespace rcfd::core {

TimeNs DeferState::expires_at() const
{
  TimeNs latest = 0;
  for (const Entry& e : entries_) {
    latest = std::max(latest, e.expires_at);
  }
  return latest;
}

TimeNs DeferState::next_expiry() const
{
  if (entries_.empty()) {
    return 0;
  }
  TimeNs earliest = entries_.front().expires_at;
  for (const Entry& e : entries_) {
    earliest = std::min(earliest, e.expires_at);
  }
  return earliest;
}

DeferState deferring_update(DeferState state, const DeferEvent& event)
{
  auto& entries = state.entries_;
  switch (event.kind) {
  case DeferEvent::Kind::HeardCts: {
    const TimeNs expiry = event.now + event.timeout;
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const DeferState::Entry& e) { return e.source == event.source; });
    if (it == entries.end()) {
      entries.push_back({event.source, expiry});
    } else {
      it->expires_at = std::max(it->expires_at, expiry);
    }
    break;
  }
  case DeferEvent::Kind::HeardAck:
    std::erase_if(entries, [&](const DeferState::Entry& e) { return e.source == event.source; });
    break;
  case DeferEvent::Kind::Timeout:
    std::erase_if(entries, [&](const DeferState::Entry& e) { return e.expires_at <= event.now; });
    break;
  }
  return state;
}

} // namespace rcfd::core
