#include "rcfd/mac/rcfd_mac.hpp"

#include <algorithm>

namespace rcfd::mac {

using core::DeferEvent;
using core::NodeRole;

bool RcfdMac::deferred(TimeNs g)
{
  if (defer_.deferred()) {
    defer_ = core::deferring_update(std::move(defer_), {DeferEvent::Kind::Timeout, g, 0, 0});
  }
  return defer_.deferred();
}

void RcfdMac::defer(NodeId source, TimeNs now, TimeNs timeout)
{
  defer_ = core::deferring_update(std::move(defer_),
                                  {DeferEvent::Kind::HeardCts, now, source, timeout});
}

void RcfdMac::on_ack_heard(NodeId src)
{
  if (defer_.deferred()) {
    defer_ = core::deferring_update(std::move(defer_),
                                    {DeferEvent::Kind::HeardAck, ctx_.now(), src, 0});
  }
}

bool RcfdMac::ack_allowed(NodeId dst) { return !deferred(ctx_.now()) || is_partner(dst); }

RcfdCoordinator::RcfdCoordinator(std::vector<RcfdMac*> macs,
                                 std::vector<std::vector<NodeId>> neighbors,
                                 const TimingsNs& timings, core::SubcarrierMap map,
                                 FdPairingRule pairing)
  : macs_(std::move(macs)), neighbors_(std::move(neighbors)), timings_(timings),
    map_(std::move(map)), pairing_(pairing)
{
  const std::size_t n = macs_.size();
  obs_.resize(n);
  role_.assign(n, NodeRole::Idle);
  contender_.assign(n, 0);
  touched_.assign(n, 0);
  pick_.resize(n);
  dest_.assign(n, 0);
  recipient_.assign(n, 0);
  cts_heard_.resize(n);
  data_start_.assign(n, -1);
}

void RcfdCoordinator::mark_data_start(NodeId i, TimeNs t0)
{
  for (NodeId v : neighbors_[i]) {
    data_start_[v] = std::max(data_start_[v], t0);
  }
}

void RcfdCoordinator::reset_touched()
{
  for (NodeId i : touched_list_) {
    obs_[i] = {};
    role_[i] = NodeRole::Idle;
    contender_[i] = 0;
    touched_[i] = 0;
    cts_heard_[i].clear();
  }
  touched_list_.clear();
}

bool RcfdCoordinator::on_grid(TimeNs g)
{
  const std::size_t n = macs_.size();
  bool work = false;
  std::vector<NodeId> contenders;
  for (NodeId i = 0; i < n; ++i) {
    RcfdMac& m = *macs_[i];
    if (m.ctx().queue().empty()) {
      continue;
    }
    work = true;
    if (m.in_exchange(g) || m.deferred(g) || !m.sensed_free(g, timings_.scan)) {
      continue;
    }
    if (const Packet* p = m.head(g)) {
      contenders.push_back(i);
      dest_[i] = p->dst;
    }
  }
  if (contenders.empty()) {
    return work;
  }
  ++counters_.contentions;

  auto touch = [&](NodeId i) {
    if (!touched_[i]) {
      touched_[i] = 1;
      touched_list_.push_back(i);
    }
  };

  // Round 1. Neighbors of contenders sense the symbols as energy.
  for (NodeId i : contenders) {
    contender_[i] = 1;
    pick_[i] = core::round1_pick(map_, macs_[i]->ctx().rng());
    touch(i);
    for (NodeId v : neighbors_[i]) {
      touch(v);
    }
  }
  std::vector<NodeId> pts;
  for (NodeId i : contenders) {
    core::SlotSet& heard = obs_[i].round1_heard;
    heard.insert(pick_[i]);
    for (NodeId v : neighbors_[i]) {
      if (contender_[v]) {
        heard.insert(pick_[v]);
      }
    }
    if (core::elect_pt(pick_[i], obs_[i])) {
      role_[i] = NodeRole::PrimaryTransmitter;
      pts.push_back(i);
    } else {
      role_[i] = NodeRole::Bystander;
    }
  }

  // Round 2: RTS from every primary transmitter.
  for (NodeId i : pts) {
    const auto rts = core::round2_emission(i, dest_[i], map_);
    auto hear = [&](NodeId h) {
      touch(h);
      obs_[h].round2_heard_set1.insert(rts[0]);
      obs_[h].round2_heard_set2.insert(rts[1]);
    };
    hear(i);
    for (NodeId v : neighbors_[i]) {
      hear(v);
    }
  }

  // Round 3: CTS from every RTS receiver.
  std::vector<NodeId> rrs;
  const std::vector<NodeId> round2_nodes = touched_list_;
  for (NodeId h : round2_nodes) {
    if (obs_[h].round2_heard_set1.empty() || role_[h] == NodeRole::PrimaryTransmitter) {
      continue;
    }
    RcfdMac& m = *macs_[h];
    // A listener would sense a neighbor's data starting during these rounds,
    // or an ACK following data that ended less than SIFS ago, so it does not
    // answer.
    const bool eligible =
      contender_[h] || (!m.in_exchange(g) && !m.deferred(g) && m.nav_until() <= g &&
                        m.ctx().channel_idle() && data_start_[h] < g &&
                        m.ctx().frame_idle_since() <= g - timings_.sifs);
    if (eligible && core::elect_rr(h, false, obs_[h], map_)) {
      role_[h] = NodeRole::RtsReceiver;
      recipient_[h] = core::select_cts_recipient(obs_[h], map_);
      rrs.push_back(h);
    }
  }
  for (NodeId h : rrs) {
    const auto cts = core::round3_emission(h, recipient_[h], map_);
    auto hear = [&](NodeId i) {
      touch(i);
      obs_[i].round3_heard_set1.insert(cts[0]);
      obs_[i].round3_heard_set2.insert(cts[1]);
    };
    hear(h);
    for (NodeId v : neighbors_[h]) {
      hear(v);
      cts_heard_[v].push_back(h);
    }
  }

  // Decisions and their effects.
  const TimeNs end = g + period();
  const TimeNs t0 = end + timings_.header;
  const TimeNs defer_timeout =
    timings_.header + timings_.data + timings_.sifs + timings_.ack + 2 * timings_.prop + timings_.slot;
  for (NodeId i : touched_list_) {
    RcfdMac& m = *macs_[i];
    m.ctx().sense_contention(end);
    std::optional<NodeId> partner;
    if (role_[i] == NodeRole::PrimaryTransmitter) {
      const core::TxDecision d =
        core::decide_transmission(i, role_[i], dest_[i], obs_[i], map_);
      if (d.transmits()) {
        m.schedule_primary(t0);
        mark_data_start(i, t0);
        partner = dest_[i];
        ++counters_.primaries;
      } else {
        ++counters_.held;
      }
    } else if (role_[i] == NodeRole::RtsReceiver) {
      const NodeId peer = recipient_[i];
      partner = peer;
      if (m.ctx().queue().has_for(peer)) {
        const core::TxDecision d = core::decide_transmission(i, role_[i], peer, obs_[i], map_);
        if (d.transmits() && m.schedule_secondary(t0, peer, pairing_)) {
          mark_data_start(i, t0);
          ++counters_.secondaries;
        }
      }
      m.expect_data(peer, t0 + timings_.data + timings_.prop + timings_.slot);
    }
    for (NodeId v : cts_heard_[i]) {
      if (!partner || v != *partner) {
        m.defer(v, end, defer_timeout);
      }
    }
  }
  reset_touched();
  return true;
}

} // namespace rcfd::mac
