#include "rcfd/mac/packet_queue.hpp"

#include <algorithm>
#include <stdexcept>

namespace rcfd::mac {

const char* to_string(PacketFate fate)
{
  switch (fate) {
  case PacketFate::Acked:
    return "acked";
  case PacketFate::RetryLimit:
    return "retry-limit";
  case PacketFate::QueueOverflow:
    return "queue-overflow";
  case PacketFate::AgeLimit:
    return "age-limit";
  }
  return "?";
}

PacketQueue::PacketQueue(std::size_t capacity, TimeNs max_age, int max_attempts,
                         std::size_t neighbors_hint)
  : capacity_(capacity), max_age_(max_age), max_attempts_(max_attempts), per_dst_(neighbors_hint, 0)
{
}

void PacketQueue::count_dst(NodeId dst, int delta)
{
  if (dst >= per_dst_.size()) {
    per_dst_.resize(dst + 1, 0);
  }
  per_dst_[dst] += delta;
}

bool PacketQueue::push(const Packet& p, TimeNs now)
{
  expire(now);
  if (q_.size() >= capacity_) {
    if (sink_) {
      sink_(p, PacketFate::QueueOverflow, now);
    }
    return false;
  }
  q_.push_back(p);
  q_.back().in_flight = false;
  count_dst(p.dst, 1);
  return true;
}

void PacketQueue::expire(TimeNs now)
{
  // Creation order makes the expired packets a prefix.
  auto it = q_.begin();
  while (it != q_.end() && it->created + max_age_ <= now) {
    if (it->in_flight) {
      ++it;
      continue;
    }
    const Packet p = *it;
    count_dst(p.dst, -1);
    it = q_.erase(it);
    if (sink_) {
      sink_(p, PacketFate::AgeLimit, p.created + max_age_);
    }
  }
}

const Packet* PacketQueue::head(TimeNs now)
{
  expire(now);
  for (const Packet& p : q_) {
    if (!p.in_flight) {
      return &p;
    }
  }
  return nullptr;
}

const Packet* PacketQueue::find_for(NodeId dst, FdPairingRule rule, TimeNs now)
{
  expire(now);
  if (!has_for(dst)) {
    return nullptr;
  }
  for (const Packet& p : q_) {
    if (p.in_flight) {
      continue;
    }
    if (p.dst == dst) {
      return &p;
    }
    if (rule == FdPairingRule::HeadOnly) {
      return nullptr;
    }
  }
  return nullptr;
}

bool PacketQueue::has_for(NodeId dst) const { return dst < per_dst_.size() && per_dst_[dst] > 0; }

std::deque<Packet>::iterator PacketQueue::locate(std::uint64_t id)
{
  return std::find_if(q_.begin(), q_.end(), [id](const Packet& p) { return p.id == id; });
}

Packet* PacketQueue::get(std::uint64_t id)
{
  auto it = locate(id);
  return it == q_.end() ? nullptr : &*it;
}

void PacketQueue::set_in_flight(std::uint64_t id, bool on)
{
  auto it = locate(id);
  if (it == q_.end()) {
    throw std::logic_error("packet not queued");
  }
  if (it->in_flight != on) {
    it->in_flight = on;
    count_dst(it->dst, on ? -1 : 1);
  }
}

void PacketQueue::remove(std::uint64_t id, PacketFate fate, TimeNs now)
{
  auto it = locate(id);
  if (it == q_.end()) {
    throw std::logic_error("packet not queued");
  }
  const Packet p = *it;
  if (!p.in_flight) {
    count_dst(p.dst, -1);
  }
  q_.erase(it);
  if (sink_) {
    sink_(p, fate, now);
  }
}

void PacketQueue::acked(std::uint64_t id, TimeNs now) { remove(id, PacketFate::Acked, now); }

bool PacketQueue::failed(std::uint64_t id, TimeNs now)
{
  Packet* p = get(id);
  if (p == nullptr) {
    throw std::logic_error("packet not queued");
  }
  if (++p->attempts >= max_attempts_) {
    remove(id, PacketFate::RetryLimit, now);
    return true;
  }
  set_in_flight(id, false);
  return false;
}

std::size_t PacketQueue::in_flight_count() const
{
  return static_cast<std::size_t>(
    std::count_if(q_.begin(), q_.end(), [](const Packet& p) { return p.in_flight; }));
}

} // namespace rcfd::mac
