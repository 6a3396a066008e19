#include "rcfd/mac/slotted_mac.hpp"

#include <algorithm>

namespace rcfd::mac {

void SlottedMac::on_enqueue() { ctx_.request_contention(); }

bool SlottedMac::sensed_free(TimeNs g, TimeNs scan) const
{
  return ctx_.channel_idle() && ctx_.idle_since() <= g - scan && nav_until_ <= g;
}

bool SlottedMac::in_exchange(TimeNs g) const
{
  return primary_ || secondary_ || !acks_.empty() || expect_until_ > g || ctx_.transmitting();
}

bool SlottedMac::is_partner(NodeId n) const
{
  return (primary_ && primary_->dst == n) || (secondary_ && secondary_->dst == n) ||
         (expect_until_ > ctx_.now() && expect_from_ == n);
}

void SlottedMac::schedule_primary(TimeNs t0)
{
  const TimeNs now = ctx_.now();
  const Packet* p = ctx_.queue().head(now);
  if (p == nullptr) {
    return;
  }
  Attempt a;
  a.packet = p->id;
  a.dst = p->dst;
  ctx_.queue().set_in_flight(a.packet, true);
  a.timer = ctx_.set_timer(t0, kSendPrimary);
  primary_ = a;
}

bool SlottedMac::schedule_secondary(TimeNs t0, NodeId dst, FdPairingRule rule)
{
  const Packet* p = ctx_.queue().find_for(dst, rule, ctx_.now());
  if (p == nullptr) {
    return false;
  }
  Attempt a;
  a.packet = p->id;
  a.dst = dst;
  ctx_.queue().set_in_flight(a.packet, true);
  a.timer = ctx_.set_timer(t0, kSendSecondary);
  secondary_ = a;
  return true;
}

void SlottedMac::expect_data(NodeId from, TimeNs until)
{
  expect_from_ = from;
  expect_until_ = std::max(expect_until_, until);
}

void SlottedMac::send(Attempt& a, bool secondary)
{
  const TimingsNs& t = ctx_.timings();
  Frame f;
  f.kind = FrameKind::Data;
  f.src = ctx_.self();
  f.dst = a.dst;
  f.airtime = t.data;
  f.nav = t.sifs + t.ack + t.prop;
  f.packet = a.packet;
  f.secondary = secondary;
  a.on_air = true;
  ctx_.transmit(f);
}

void SlottedMac::settle(std::optional<Attempt>& a, bool success)
{
  if (success) {
    ctx_.queue().acked(a->packet, ctx_.now());
  } else {
    ctx_.queue().failed(a->packet, ctx_.now());
  }
  a.reset();
}

void SlottedMac::on_receive(const Frame& f)
{
  const TimeNs now = ctx_.now();
  const TimingsNs& t = ctx_.timings();
  if (f.kind == FrameKind::Ack) {
    on_ack_heard(f.src);
  }
  if (f.dst != ctx_.self()) {
    nav_until_ = std::max(nav_until_, now + f.nav);
    return;
  }
  if (f.kind == FrameKind::Data) {
    const bool partner = is_partner(f.src);
    if (f.src == expect_from_) {
      expect_until_ = 0;
    }
    acks_.push_back({ctx_.set_timer(now + t.sifs, kSendAck), f.src, partner});
  } else if (f.kind == FrameKind::Ack) {
    if (primary_ && primary_->on_air && primary_->timer != 0 && f.src == primary_->dst) {
      settle(primary_, true);
    } else if (secondary_ && secondary_->on_air && secondary_->timer != 0 &&
               f.src == secondary_->dst) {
      settle(secondary_, true);
    }
  }
}

void SlottedMac::on_tx_end(const Frame& f)
{
  if (f.kind != FrameKind::Data) {
    return;
  }
  const TimingsNs& t = ctx_.timings();
  const TimeNs deadline = ctx_.now() + t.sifs + t.ack + 2 * t.prop + t.slot;
  std::optional<Attempt>& a = f.secondary ? secondary_ : primary_;
  if (a && a->packet == f.packet) {
    a->timer = ctx_.set_timer(deadline, f.secondary ? kSecondaryTimeout : kPrimaryTimeout);
  }
}

void SlottedMac::on_timer(int tag, std::uint64_t id)
{
  switch (tag) {
  case kSendPrimary:
  case kSendSecondary: {
    std::optional<Attempt>& a = tag == kSendPrimary ? primary_ : secondary_;
    if (!a || a->timer != id) {
      return;
    }
    a->timer = 0;
    if (ctx_.transmitting()) {
      settle(a, false);
      return;
    }
    send(*a, tag == kSendSecondary);
    break;
  }
  case kPrimaryTimeout:
  case kSecondaryTimeout: {
    std::optional<Attempt>& a = tag == kPrimaryTimeout ? primary_ : secondary_;
    if (a && a->timer == id) {
      settle(a, false);
    }
    break;
  }
  case kSendAck: {
    auto it = std::find_if(acks_.begin(), acks_.end(),
                           [id](const PendingAck& p) { return p.timer == id; });
    if (it == acks_.end()) {
      return;
    }
    const NodeId dst = it->dst;
    const bool partner = it->partner;
    acks_.erase(it);
    if (ctx_.transmitting() || (!partner && !ack_allowed(dst))) {
      return;
    }
    const TimingsNs& t = ctx_.timings();
    Frame ack;
    ack.kind = FrameKind::Ack;
    ack.src = ctx_.self();
    ack.dst = dst;
    ack.airtime = t.ack;
    ctx_.transmit(ack);
    break;
  }
  }
}

} // namespace rcfd::mac
