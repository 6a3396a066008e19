// Deferral after an overheard CTS.
//
// A node that hears a CTS it is not part of stays off the channel until the
// CTS sender's ACK is heard or a timeout armed at CTS detection expires.

#pragma once

#include <cstdint>
#include <vector>

#include "rcfd/common/time.hpp"
#include "rcfd/core/types.hpp"

namespace rcfd::core {

struct DeferEvent {
  enum class Kind { HeardCts, HeardAck, Timeout };

  Kind kind = Kind::Timeout;
  /// Current time.
  TimeNs now = 0;
  /// Sender of the CTS or ACK.
  NodeId source = 0;
  /// Timeout length armed by a CTS.
  TimeNs timeout = 0;
};

class DeferState {
public:
  struct Entry {
    NodeId source;
    TimeNs expires_at;
    bool operator==(const Entry&) const = default;
  };

  bool deferred() const { return !entries_.empty(); }

  /// Latest expiry over all pending entries, or 0 when clear.
  TimeNs expires_at() const;

  /// Earliest expiry over all pending entries, or 0 when clear.
  TimeNs next_expiry() const;

  const std::vector<Entry>& entries() const { return entries_; }

  bool operator==(const DeferState&) const = default;

private:
  friend DeferState deferring_update(DeferState state, const DeferEvent& event);
  std::vector<Entry> entries_;
};

/// HeardCts arms or refreshes the entry for its source. HeardAck clears the
/// entry of its source. Timeout drops every entry whose expiry has passed.
DeferState deferring_update(DeferState state, const DeferEvent& event);

} // namespace rcfd::core
