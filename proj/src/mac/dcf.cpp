#include "rcfd/mac/dcf.hpp"

#include <algorithm>

namespace rcfd::mac {

FdResponse fdmac_on_rts(PacketQueue& queue, NodeId rts_sender, FdPairingRule rule, TimeNs now)
{
  FdResponse r;
  if (const Packet* p = queue.find_for(rts_sender, rule, now)) {
    r.data = p->id;
  }
  return r;
}

DcfMac::DcfMac(MacContext& ctx, DcfMode mode, FdPairingRule pairing)
  : Mac(ctx), mode_(mode), pairing_(pairing)
{
  const TimingsNs& t = ctx_.timings();
  backoff_.w_initial = t.w_initial;
  backoff_.stage_cap = t.stage_cap;
  backoff_.draw(ctx_.rng());
}

bool DcfMac::in_own_exchange() const
{
  return phase_ == Phase::SendRts || phase_ == Phase::WaitCts || phase_ == Phase::SendData ||
         phase_ == Phase::WaitAck;
}

void DcfMac::on_enqueue()
{
  if (phase_ == Phase::Idle) {
    start_attempt();
  }
}

void DcfMac::start_attempt()
{
  if (ctx_.queue().head(ctx_.now()) == nullptr) {
    phase_ = Phase::Idle;
    return;
  }
  phase_ = Phase::Backoff;
  try_resume();
}

void DcfMac::try_resume()
{
  if (phase_ != Phase::Backoff || backoff_timer_ != 0 || !ctx_.channel_idle()) {
    return;
  }
  const TimeNs now = ctx_.now();
  const TimingsNs& t = ctx_.timings();
  if (nav_until_ > now) {
    nav_timer_ = ctx_.set_timer(nav_until_, kNavEnd);
    return;
  }
  // EIFS after an undecodable frame leaves room for the ACK it may have asked for.
  const TimeNs ifs = eifs_ ? t.sifs + t.ack + t.difs : t.difs;
  countdown_start_ = std::max({ctx_.idle_since() + ifs, nav_until_ + t.difs, now});
  backoff_timer_ = ctx_.set_timer(countdown_start_ + backoff_.counter * t.slot, kBackoffDone);
}

void DcfMac::freeze()
{
  if (backoff_timer_ == 0) {
    return;
  }
  backoff_.counter =
    backoff_freeze(backoff_.counter, countdown_start_, ctx_.now(), ctx_.timings().slot);
  backoff_timer_ = 0;
}

void DcfMac::on_channel_busy() { freeze(); }

void DcfMac::on_channel_idle() { try_resume(); }

void DcfMac::begin_transmission()
{
  const Packet* head = ctx_.queue().head(ctx_.now());
  if (head == nullptr) {
    phase_ = Phase::Idle;
    return;
  }
  current_ = head->id;
  current_dst_ = head->dst;
  ctx_.queue().set_in_flight(current_, true);
  const TimingsNs& t = ctx_.timings();
  if (mode_ == DcfMode::Basic) {
    phase_ = Phase::SendData;
    send_data(current_, false);
    return;
  }
  phase_ = Phase::SendRts;
  Frame rts;
  rts.kind = FrameKind::Rts;
  rts.src = ctx_.self();
  rts.dst = current_dst_;
  rts.airtime = t.rts;
  rts.nav = 3 * t.sifs + t.cts + t.data + t.ack + 3 * t.prop;
  ctx_.transmit(rts);
}

void DcfMac::send_data(std::uint64_t packet, bool secondary)
{
  const TimingsNs& t = ctx_.timings();
  const Packet* p = ctx_.queue().get(packet);
  Frame f;
  f.kind = FrameKind::Data;
  f.src = ctx_.self();
  f.dst = p->dst;
  f.airtime = t.data;
  f.nav = t.sifs + t.ack + t.prop;
  f.packet = packet;
  f.secondary = secondary;
  freeze();
  ctx_.transmit(f);
}

void DcfMac::attempt_succeeded()
{
  ctx_.queue().acked(current_, ctx_.now());
  backoff_.on_success(ctx_.rng());
  start_attempt();
}

void DcfMac::attempt_failed()
{
  if (ctx_.queue().failed(current_, ctx_.now())) {
    backoff_.on_success(ctx_.rng());
  } else {
    backoff_.on_failure(ctx_.rng());
  }
  start_attempt();
}

void DcfMac::on_receive_error()
{
  eifs_ = true;
  if (backoff_timer_ != 0) {
    freeze();
    try_resume();
  }
}

void DcfMac::on_receive(const Frame& f)
{
  const TimeNs now = ctx_.now();
  const TimingsNs& t = ctx_.timings();
  eifs_ = false;
  if (f.dst != ctx_.self()) {
    if (now + f.nav > nav_until_) {
      nav_until_ = now + f.nav;
      freeze();
      try_resume();
    }
    return;
  }
  switch (f.kind) {
  case FrameKind::Rts:
    if (nav_until_ <= now && !in_own_exchange() && cts_timer_ == 0 && !secondary_) {
      cts_to_ = f.src;
      cts_timer_ = ctx_.set_timer(now + t.sifs, kSendCts);
      if (mode_ == DcfMode::FullDuplex) {
        const FdResponse r = fdmac_on_rts(ctx_.queue(), f.src, pairing_, now);
        if (r.data) {
          secondary_ = r.data;
          secondary_dst_ = f.src;
          ctx_.queue().set_in_flight(*secondary_, true);
        }
      }
    }
    break;
  case FrameKind::Cts:
    if (phase_ == Phase::WaitCts && f.src == current_dst_) {
      timeout_ = 0;
      phase_ = Phase::SendData;
      timeout_ = ctx_.set_timer(now + t.sifs, kSendData);
    }
    break;
  case FrameKind::Data:
    acks_.push_back({ctx_.set_timer(now + t.sifs, kSendAck), f.src});
    break;
  case FrameKind::Ack:
    if (phase_ == Phase::WaitAck && f.src == current_dst_) {
      timeout_ = 0;
      attempt_succeeded();
    } else if (secondary_ && secondary_timeout_ != 0 && f.src == secondary_dst_) {
      ctx_.queue().acked(*secondary_, now);
      secondary_.reset();
      secondary_timeout_ = 0;
    }
    break;
  }
}

void DcfMac::on_tx_end(const Frame& f)
{
  const TimeNs now = ctx_.now();
  const TimingsNs& t = ctx_.timings();
  switch (f.kind) {
  case FrameKind::Rts:
    phase_ = Phase::WaitCts;
    timeout_ = ctx_.set_timer(now + t.sifs + t.cts + 2 * t.prop + t.slot, kCtsTimeout);
    break;
  case FrameKind::Data:
    if (f.secondary) {
      secondary_timeout_ =
        ctx_.set_timer(now + t.sifs + t.ack + 2 * t.prop + t.slot, kSecondaryAckTimeout);
    } else {
      phase_ = Phase::WaitAck;
      timeout_ = ctx_.set_timer(now + t.sifs + t.ack + 2 * t.prop + t.slot, kAckTimeout);
    }
    break;
  case FrameKind::Cts:
    if (secondary_) {
      // The reply starts one SIFS after the CTS, alongside the primary data.
      ctx_.set_timer(now + t.sifs, kSendSecondary);
    }
    break;
  case FrameKind::Ack:
    break;
  }
}

void DcfMac::on_timer(int tag, std::uint64_t id)
{
  const TimingsNs& t = ctx_.timings();
  switch (tag) {
  case kBackoffDone:
    if (id != backoff_timer_) {
      return;
    }
    backoff_timer_ = 0;
    backoff_.counter = 0;
    if (ctx_.transmitting()) {
      return; // resumes with a zero counter once the channel clears
    }
    begin_transmission();
    break;
  case kNavEnd:
    if (id == nav_timer_) {
      nav_timer_ = 0;
      try_resume();
    }
    break;
  case kCtsTimeout:
  case kAckTimeout:
    if (id == timeout_) {
      timeout_ = 0;
      attempt_failed();
    }
    break;
  case kSendData:
    if (id == timeout_) {
      timeout_ = 0;
      if (ctx_.transmitting()) {
        attempt_failed();
        return;
      }
      send_data(current_, false);
    }
    break;
  case kSendCts:
    if (id != cts_timer_) {
      return;
    }
    cts_timer_ = 0;
    if (ctx_.transmitting()) {
      if (secondary_) {
        ctx_.queue().set_in_flight(*secondary_, false);
        secondary_.reset();
      }
      return;
    }
    {
      Frame cts;
      cts.kind = FrameKind::Cts;
      cts.src = ctx_.self();
      cts.dst = cts_to_;
      cts.airtime = t.cts;
      cts.nav = 2 * t.sifs + t.data + t.ack + 2 * t.prop;
      freeze(); // own responses pause the countdown like any busy medium
      ctx_.transmit(cts);
    }
    break;
  case kSendSecondary:
    if (!secondary_) {
      return;
    }
    if (ctx_.transmitting()) {
      ctx_.queue().set_in_flight(*secondary_, false);
      secondary_.reset();
      return;
    }
    send_data(*secondary_, true);
    break;
  case kSecondaryAckTimeout:
    if (id == secondary_timeout_ && secondary_) {
      secondary_timeout_ = 0;
      ctx_.queue().failed(*secondary_, ctx_.now());
      secondary_.reset();
    }
    break;
  case kSendAck: {
    auto it = std::find_if(acks_.begin(), acks_.end(),
                           [id](const PendingAck& a) { return a.timer == id; });
    if (it == acks_.end()) {
      return;
    }
    const NodeId dst = it->dst;
    acks_.erase(it);
    if (ctx_.transmitting()) {
      return;
    }
    Frame ack;
    ack.kind = FrameKind::Ack;
    ack.src = ctx_.self();
    ack.dst = dst;
    ack.airtime = t.ack;
    freeze();
    ctx_.transmit(ack);
    break;
  }
  }
}

} // namespace rcfd::mac
