// Deterministic event queue.
//
// Events at equal times run in (node, kind, insertion) order. Grid-wide
// events use node kGlobalNode so they run after every node event at their
// instant.

#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "rcfd/common/time.hpp"

namespace rcfd::sim {

enum class EventKind : std::uint8_t {
  ArrivalEnd,
  TxEnd,
  ArrivalStart,
  Timer,
  Traffic,
  Grid,
};

constexpr std::uint32_t kGlobalNode = std::numeric_limits<std::uint32_t>::max();

struct Event {
  TimeNs time = 0;
  std::uint32_t node = 0;
  EventKind kind = EventKind::Timer;
  std::uint64_t seq = 0;
  std::uint64_t a = 0;
  std::int64_t b = 0;
};

class EventQueue {
public:
  void push(Event e)
  {
    e.seq = next_seq_++;
    heap_.push(e);
  }
  bool empty() const { return heap_.empty(); }
  const Event& top() const { return heap_.top(); }
  Event pop()
  {
    Event e = heap_.top();
    heap_.pop();
    return e;
  }
  std::size_t size() const { return heap_.size(); }

private:
  struct Later {
    bool operator()(const Event& x, const Event& y) const
    {
      if (x.time != y.time) {
        return x.time > y.time;
      }
      if (x.node != y.node) {
        return x.node > y.node;
      }
      if (x.kind != y.kind) {
        return x.kind > y.kind;
      }
      return x.seq > y.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

} // namespace rcfd::sim
