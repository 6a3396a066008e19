#include "rcfd/sim/engine.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "rcfd/core/subcarrier_map.hpp"
#include "rcfd/mac/back2f.hpp"
#include "rcfd/mac/dcf.hpp"
#include "rcfd/mac/rcfd_mac.hpp"
#include "rcfd/sim/event_queue.hpp"

namespace rcfd::sim {

using analytic::Protocol;
using mac::Frame;
using mac::FrameKind;
using mac::Packet;
using mac::PacketFate;

namespace {

constexpr std::uint64_t kRefill = std::numeric_limits<std::uint64_t>::max();

// Stream labels for derive_seed. Each consumer owns one stream so that a
// protocol change leaves traffic and topology draws untouched.
constexpr std::uint64_t kMacStream = 0x1000000;
constexpr std::uint64_t kSaturationStream = 0x2000000;
constexpr std::uint64_t kChannelStream = 0x3000000;
constexpr std::uint64_t kAppStream = 0x100000000;

} // namespace

struct Engine::Impl {
  struct Node;

  class Ctx final : public mac::MacContext {
  public:
    Ctx(Impl& sim, Node& node) : sim_(sim), node_(node) {}
    NodeId self() const override;
    TimeNs now() const override { return sim_.now; }
    Rng& rng() override;
    const mac::TimingsNs& timings() const override { return sim_.t; }
    mac::PacketQueue& queue() override;
    void transmit(const Frame& frame) override;
    bool transmitting() const override;
    std::uint64_t set_timer(TimeNs at, int tag) override;
    bool channel_idle() const override;
    TimeNs idle_since() const override;
    TimeNs frame_idle_since() const override { return node_.frame_idle_since; }
    void sense_contention(TimeNs until) override;
    void request_contention() override { sim_.request_grid(); }

  private:
    Impl& sim_;
    Node& node_;
  };

  struct Arrival {
    std::uint32_t tx;
    TimeNs end;
    bool corrupted;
    /// The sender's own signal, kept for carrier sense only.
    bool own;
  };

  struct Node {
    Node(Impl& sim, NodeId id_, const SimConfig& cfg, std::size_t n)
      : id(id_),
        queue(cfg.queue_capacity, s_to_ns(cfg.max_age_s), cfg.max_attempts, n),
        rng(derive_seed(cfg.seed, kMacStream + id_)),
        traffic_rng(derive_seed(cfg.seed, kSaturationStream + id_)), ctx(sim, *this)
    {
    }

    NodeId id;
    mac::PacketQueue queue;
    Rng rng;
    Rng traffic_rng;
    Ctx ctx;
    std::unique_ptr<mac::Mac> mac;
    bool transmitting = false;
    std::vector<Arrival> arrivals;
    TimeNs frame_idle_since = 0;
    TimeNs contention_until = 0;
    bool notified_busy = false;
    bool refill_pending = false;
    NodeTally tally;
  };

  struct Tx {
    Frame frame;
    bool live = false;
  };

  struct App {
    NodeId src;
    NodeId dst;
    Rng rng;
    TimeNs on_end = 0;
    /// ON time still needed before the next packet.
    TimeNs need = 0;
  };

  Impl(Topology topo_, SimConfig cfg_, const MacFactory& factory);

  void request_grid();
  void start_tx(Node& n, const Frame& f);
  std::uint64_t add_timer(NodeId i, TimeNs at, int tag);
  SimMetrics run();

  void on_arrival_start(const Event& e);
  void on_arrival_end(const Event& e);
  void on_tx_end(const Event& e);
  void on_traffic(const Event& e);
  void on_grid(const Event& e);
  void update_busy(Node& n);
  void generate(NodeId src, NodeId dst);
  void refill(Node& n);
  void schedule_app(std::size_t idx, TimeNs from);
  void deliver(const Frame& f);
  void settle(NodeId i, const Packet& p, PacketFate fate, TimeNs at);
  void observe(FrameEvent::Type type, NodeId at, const Frame& f);
  bool in_window(TimeNs at) const { return at >= window_start && at < window_end; }

  Topology topo;
  SimConfig cfg;
  bool fd = false;
  std::uint32_t m = 1;
  mac::TimingsNs t;
  TimeNs now = 0;
  TimeNs window_start = 0;
  TimeNs window_end = 0;
  TimeNs interval = 0;
  EventQueue events;
  std::vector<std::unique_ptr<Node>> nodes;
  std::unique_ptr<mac::ContentionCoordinator> coord;
  mac::RcfdCoordinator* rcfd_coord = nullptr;
  mac::Back2fCoordinator* back2f_coord = nullptr;
  bool grid_scheduled = false;
  std::vector<Tx> txs;
  std::vector<std::uint32_t> free_tx;
  std::vector<App> apps;
  Rng channel_rng;
  std::uint64_t next_timer = 0;
  std::uint64_t next_packet = 1;
  std::unordered_set<std::uint64_t> delivered;
  FrameObserver observer;
  bool ran = false;
  bool custom_macs = false;

  SimMetrics out;
  double delay_sum = 0;
  std::uint64_t delay_count = 0;
  double delivered_delay_sum = 0;
};

NodeId Engine::Impl::Ctx::self() const { return node_.id; }
Rng& Engine::Impl::Ctx::rng() { return node_.rng; }
mac::PacketQueue& Engine::Impl::Ctx::queue() { return node_.queue; }
void Engine::Impl::Ctx::transmit(const Frame& frame) { sim_.start_tx(node_, frame); }
bool Engine::Impl::Ctx::transmitting() const { return node_.transmitting; }

std::uint64_t Engine::Impl::Ctx::set_timer(TimeNs at, int tag)
{
  return sim_.add_timer(node_.id, at, tag);
}

bool Engine::Impl::Ctx::channel_idle() const
{
  return !node_.transmitting && node_.arrivals.empty();
}

TimeNs Engine::Impl::Ctx::idle_since() const
{
  return std::max(node_.frame_idle_since, node_.contention_until);
}

void Engine::Impl::Ctx::sense_contention(TimeNs until)
{
  node_.contention_until = std::max(node_.contention_until, until);
}

Engine::Impl::Impl(Topology topo_, SimConfig cfg_, const MacFactory& factory)
  : topo(std::move(topo_)), cfg(std::move(cfg_)), channel_rng(derive_seed(cfg.seed, kChannelStream))
{
  cfg.validate();
  const std::size_t n = topo.size();
  if (n == 0) {
    throw ConfigError(ConfigErrc::InvalidValue, "topology has no nodes");
  }
  fd = full_duplex(cfg.protocol);
  if (cfg.protocol == Protocol::Rcfd) {
    m = modulation_order_for(n, cfg.timings.subcarriers, cfg.modulation_order);
  }
  t = mac::TimingsNs::from(cfg.timings, analytic::t_data(cfg.length_bytes, cfg.rate_mbps, cfg.td));
  window_start = s_to_ns(cfg.traffic.t_s_max);
  window_end = window_start + s_to_ns(cfg.duration_s);
  interval = s_to_ns(8.0 * cfg.length_bytes / cfg.traffic.rate_bps);
  if (interval <= 0) {
    throw ConfigError(ConfigErrc::InvalidValue, "packet interval rounds to zero");
  }

  nodes.reserve(n);
  for (NodeId i = 0; i < n; ++i) {
    nodes.push_back(std::make_unique<Node>(*this, i, cfg, n));
    nodes.back()->queue.set_sink(
      [this, i](const Packet& p, PacketFate fate, TimeNs at) { settle(i, p, fate, at); });
  }

  if (factory) {
    custom_macs = true;
    for (auto& node : nodes) {
      node->mac = factory(node->ctx);
    }
    return;
  }

  switch (cfg.protocol) {
  case Protocol::Dcf:
  case Protocol::DcfRtsCts:
  case Protocol::FdMac: {
    const mac::DcfMode mode = cfg.protocol == Protocol::Dcf        ? mac::DcfMode::Basic
                              : cfg.protocol == Protocol::DcfRtsCts ? mac::DcfMode::RtsCts
                                                                    : mac::DcfMode::FullDuplex;
    for (auto& node : nodes) {
      node->mac = std::make_unique<mac::DcfMac>(node->ctx, mode, cfg.pairing);
    }
    break;
  }
  case Protocol::Back2f: {
    std::vector<mac::Back2fMac*> macs;
    for (auto& node : nodes) {
      auto mac = std::make_unique<mac::Back2fMac>(node->ctx);
      macs.push_back(mac.get());
      node->mac = std::move(mac);
    }
    auto c = std::make_unique<mac::Back2fCoordinator>(std::move(macs), topo.neighbors, t);
    back2f_coord = c.get();
    coord = std::move(c);
    break;
  }
  case Protocol::Rcfd: {
    std::vector<mac::RcfdMac*> macs;
    for (auto& node : nodes) {
      auto mac = std::make_unique<mac::RcfdMac>(node->ctx);
      macs.push_back(mac.get());
      node->mac = std::move(mac);
    }
    auto map = core::default_mapping(static_cast<std::uint32_t>(n),
                                     static_cast<std::uint32_t>(cfg.timings.subcarriers), m);
    auto c = std::make_unique<mac::RcfdCoordinator>(std::move(macs), topo.neighbors, t,
                                                    std::move(map), cfg.pairing);
    rcfd_coord = c.get();
    coord = std::move(c);
    break;
  }
  }
}

std::uint64_t Engine::Impl::add_timer(NodeId i, TimeNs at, int tag)
{
  if (at < now) {
    throw std::logic_error("timer set in the past");
  }
  const std::uint64_t id = ++next_timer;
  events.push({at, i, EventKind::Timer, 0, id, tag});
  return id;
}

void Engine::Impl::request_grid()
{
  if (!coord || grid_scheduled) {
    return;
  }
  const TimeNs p = coord->period();
  const TimeNs g = (now + p - 1) / p * p;
  events.push({g, kGlobalNode, EventKind::Grid, 0, 0, 0});
  grid_scheduled = true;
}

void Engine::Impl::observe(FrameEvent::Type type, NodeId at, const Frame& f)
{
  if (observer) {
    observer(FrameEvent{type, now, at, f});
  }
}

void Engine::Impl::start_tx(Node& n, const Frame& f)
{
  if (n.transmitting) {
    throw std::logic_error("node already transmitting");
  }
  std::uint32_t id;
  if (free_tx.empty()) {
    id = static_cast<std::uint32_t>(txs.size());
    txs.emplace_back();
  } else {
    id = free_tx.back();
    free_tx.pop_back();
  }
  txs[id].frame = f;
  txs[id].live = true;
  n.transmitting = true;
  n.notified_busy = true;
  if (!fd) {
    for (Arrival& a : n.arrivals) {
      if (!a.own && a.end > now) {
        a.corrupted = true;
      }
    }
  }
  if (f.kind == FrameKind::Data) {
    ++out.data_frames;
  }
  observe(FrameEvent::Type::TxStart, n.id, f);
  events.push({now + t.prop, n.id, EventKind::ArrivalStart, 0, id, 0});
  events.push({now + f.airtime, n.id, EventKind::TxEnd, 0, id, 0});
  events.push({now + f.airtime + t.prop, n.id, EventKind::ArrivalEnd, 0, id, 0});
}

void Engine::Impl::update_busy(Node& n)
{
  const bool busy = n.transmitting || !n.arrivals.empty();
  if (busy == n.notified_busy) {
    return;
  }
  n.notified_busy = busy;
  if (busy) {
    n.mac->on_channel_busy();
  } else {
    n.mac->on_channel_idle();
  }
}

void Engine::Impl::on_arrival_start(const Event& e)
{
  const auto id = static_cast<std::uint32_t>(e.a);
  const Frame& f = txs[id].frame;
  const TimeNs end = now + f.airtime;
  auto reach = [&](Node& n, bool own) {
    Arrival a{id, end, false, own};
    if (!own) {
      for (Arrival& other : n.arrivals) {
        if (!other.own && other.end > now) {
          other.corrupted = true;
          a.corrupted = true;
        }
      }
      if (!fd && n.transmitting) {
        a.corrupted = true;
      }
    }
    n.arrivals.push_back(a);
    update_busy(n);
  };
  reach(*nodes[e.node], true);
  for (NodeId r : topo.neighbors[e.node]) {
    reach(*nodes[r], false);
  }
}

void Engine::Impl::on_arrival_end(const Event& e)
{
  const auto id = static_cast<std::uint32_t>(e.a);
  const Frame f = txs[id].frame;
  auto leave = [&](Node& n) {
    auto it = std::find_if(n.arrivals.begin(), n.arrivals.end(),
                           [id](const Arrival& a) { return a.tx == id; });
    if (it == n.arrivals.end()) {
      throw std::logic_error("arrival missing");
    }
    const Arrival a = *it;
    n.arrivals.erase(it);
    if (!n.transmitting && n.arrivals.empty()) {
      n.frame_idle_since = now;
    }
    if (!a.own) {
      const bool data = f.kind == FrameKind::Data;
      if (a.corrupted) {
        if (data && n.id == f.dst) {
          ++out.data_collisions;
          if (f.secondary) {
            ++out.secondary_collisions;
          }
        }
        observe(FrameEvent::Type::Collided, n.id, f);
        n.mac->on_receive_error();
      } else if (data && cfg.loss_p > 0 && channel_rng.bernoulli(cfg.loss_p)) {
        if (n.id == f.dst) {
          ++out.erasures;
        }
        observe(FrameEvent::Type::Erased, n.id, f);
        n.mac->on_receive_error();
      } else {
        if (data && n.id == f.dst) {
          deliver(f);
        }
        observe(FrameEvent::Type::Decoded, n.id, f);
        n.mac->on_receive(f);
      }
    }
    update_busy(n);
  };
  leave(*nodes[e.node]);
  for (NodeId r : topo.neighbors[e.node]) {
    leave(*nodes[r]);
  }
  txs[id].live = false;
  free_tx.push_back(id);
}

void Engine::Impl::on_tx_end(const Event& e)
{
  Node& n = *nodes[e.node];
  n.transmitting = false;
  if (n.arrivals.empty()) {
    n.frame_idle_since = now;
  }
  const Frame f = txs[e.a].frame;
  n.mac->on_tx_end(f);
  update_busy(n);
}

void Engine::Impl::deliver(const Frame& f)
{
  if (delivered.contains(f.packet)) {
    return;
  }
  const Packet* p = nodes[f.src]->queue.get(f.packet);
  if (p == nullptr) {
    throw std::logic_error("delivered packet not queued at its source");
  }
  delivered.insert(f.packet);
  Node& src = *nodes[f.src];
  ++src.tally.delivered;
  if (in_window(now)) {
    const double d = ns_to_s(now - p->created);
    ++out.delivered;
    out.delivered_bits += 8.0 * cfg.length_bytes;
    ++out.delivered_per_node[f.src];
    delay_sum += d;
    delivered_delay_sum += d;
    ++delay_count;
    out.max_delay_s = std::max(out.max_delay_s, d);
  }
}

void Engine::Impl::settle(NodeId i, const Packet& p, PacketFate fate, TimeNs at)
{
  Node& n = *nodes[i];
  if (cfg.traffic.saturated && fate != PacketFate::QueueOverflow && !n.refill_pending) {
    n.refill_pending = true;
    events.push({now, i, EventKind::Traffic, 0, kRefill, 0});
  }
  if (delivered.erase(p.id) > 0) {
    return;
  }
  if (fate == PacketFate::Acked) {
    throw std::logic_error("acknowledged packet was never delivered");
  }
  ++n.tally.discarded;
  if (!in_window(at)) {
    return;
  }
  switch (fate) {
  case PacketFate::RetryLimit:
    ++out.discarded_retry;
    break;
  case PacketFate::QueueOverflow:
    ++out.discarded_overflow;
    break;
  case PacketFate::AgeLimit:
    ++out.discarded_age;
    break;
  case PacketFate::Acked:
    break;
  }
  // An overflow drop leaves at its creation instant, so it adds zero delay.
  const double d = ns_to_s(at - p.created);
  delay_sum += d;
  ++delay_count;
  out.max_delay_s = std::max(out.max_delay_s, d);
}

void Engine::Impl::generate(NodeId src, NodeId dst)
{
  Node& n = *nodes[src];
  Packet p;
  p.id = next_packet++;
  p.src = src;
  p.dst = dst;
  p.created = now;
  ++n.tally.generated;
  if (in_window(now)) {
    ++out.generated;
  }
  if (n.queue.push(p, now)) {
    n.mac->on_enqueue();
  }
}

void Engine::Impl::refill(Node& n)
{
  n.refill_pending = false;
  const auto& nb = topo.neighbors[n.id];
  if (nb.empty()) {
    return;
  }
  n.queue.expire(now);
  while (n.queue.size() < static_cast<std::size_t>(cfg.traffic.saturation_depth)) {
    generate(n.id, nb[n.traffic_rng.below(nb.size())]);
  }
}

void Engine::Impl::schedule_app(std::size_t idx, TimeNs from)
{
  App& a = apps[idx];
  while (from < window_end) {
    const TimeNs at = from + a.need;
    if (at < a.on_end) {
      if (at < window_end) {
        events.push({at, a.src, EventKind::Traffic, 0, idx, 0});
      }
      return;
    }
    a.need -= a.on_end - from;
    from = a.on_end + s_to_ns(a.rng.exponential(cfg.traffic.t_off));
    a.on_end = from + s_to_ns(a.rng.exponential(cfg.traffic.t_on));
  }
}

void Engine::Impl::on_traffic(const Event& e)
{
  if (e.a == kRefill) {
    refill(*nodes[e.node]);
    return;
  }
  App& a = apps[e.a];
  generate(a.src, a.dst);
  a.need = interval;
  schedule_app(e.a, now);
}

void Engine::Impl::on_grid(const Event&)
{
  grid_scheduled = false;
  if (coord->on_grid(now)) {
    events.push({now + coord->period(), kGlobalNode, EventKind::Grid, 0, 0, 0});
    grid_scheduled = true;
  }
}

SimMetrics Engine::Impl::run()
{
  if (ran) {
    throw std::logic_error("engine already ran");
  }
  ran = true;
  const std::size_t n = nodes.size();
  out.delivered_per_node.assign(n, 0);
  out.offered_bps = cfg.traffic.saturated ? 0 : offered_traffic(topo, cfg.traffic);

  if (custom_macs) {
    // Scripted MACs bring their own frames.
  } else if (cfg.traffic.saturated) {
    std::vector<NodeId> sources = cfg.traffic.saturated_sources;
    if (sources.empty()) {
      for (NodeId i = 0; i < n; ++i) {
        sources.push_back(i);
      }
    }
    for (NodeId i : sources) {
      if (i >= n) {
        throw ConfigError(ConfigErrc::InvalidValue, "saturated source out of range");
      }
      nodes[i]->refill_pending = true;
      events.push({0, i, EventKind::Traffic, 0, kRefill, 0});
    }
  } else {
    const double t_max = cfg.traffic.t_s_max;
    for (NodeId src = 0; src < n; ++src) {
      for (NodeId dst : topo.neighbors[src]) {
        App a{src, dst, Rng(derive_seed(cfg.seed, kAppStream + (std::uint64_t{src} << 20) + dst))};
        double start = 0;
        if (t_max > 0) {
          start = a.rng.exponential(1.0 / cfg.traffic.lambda_s);
          while (start > t_max) {
            start = a.rng.exponential(1.0 / cfg.traffic.lambda_s);
          }
        }
        const TimeNs s = s_to_ns(start);
        a.on_end = s + s_to_ns(a.rng.exponential(cfg.traffic.t_on));
        a.need = interval;
        apps.push_back(std::move(a));
        schedule_app(apps.size() - 1, s);
      }
    }
  }

  while (!events.empty() && events.top().time < window_end) {
    const Event e = events.pop();
    now = e.time;
    ++out.events;
    switch (e.kind) {
    case EventKind::ArrivalEnd:
      on_arrival_end(e);
      break;
    case EventKind::TxEnd:
      on_tx_end(e);
      break;
    case EventKind::ArrivalStart:
      on_arrival_start(e);
      break;
    case EventKind::Timer: {
      Node& node = *nodes[e.node];
      node.mac->on_timer(static_cast<int>(e.b), e.a);
      break;
    }
    case EventKind::Traffic:
      on_traffic(e);
      break;
    case EventKind::Grid:
      on_grid(e);
      break;
    }
  }
  now = window_end;

  // Settle packets whose age limit passed before the end.
  for (auto& node : nodes) {
    node->queue.expire(window_end);
  }

  out.tally.resize(n);
  for (auto& node : nodes) {
    NodeTally& tally = node->tally;
    for (const Packet& p : node->queue.packets()) {
      if (delivered.contains(p.id)) {
        continue;
      }
      if (p.in_flight) {
        ++tally.in_flight;
      } else {
        ++tally.queued;
      }
    }
    out.tally[node->id] = tally;
  }

  const double T = cfg.duration_s;
  out.utilization = out.delivered_bits / T / (cfg.rate_mbps * 1e6);
  out.gamma = out.offered_bps > 0 ? out.delivered_bits / T / out.offered_bps : 0;
  out.delta_s = delay_count > 0 ? delay_sum / static_cast<double>(delay_count) : 0;
  out.delay_delivered_s =
    out.delivered > 0 ? delivered_delay_sum / static_cast<double>(out.delivered) : 0;
  std::vector<double> p;
  for (NodeId i = 0; i < n; ++i) {
    if (!topo.neighbors[i].empty()) {
      p.push_back(static_cast<double>(out.delivered_per_node[i]));
    }
  }
  out.jain = jain_index(p);
  if (rcfd_coord != nullptr) {
    out.contentions = rcfd_coord->counters().contentions;
  } else if (back2f_coord != nullptr) {
    out.contentions = back2f_coord->contentions();
  }
  return out;
}

Engine::Engine(Topology topo, SimConfig cfg)
  : impl_(std::make_unique<Impl>(std::move(topo), std::move(cfg), MacFactory{}))
{
}

Engine::Engine(Topology topo, SimConfig cfg, MacFactory factory)
  : impl_(std::make_unique<Impl>(std::move(topo), std::move(cfg), factory))
{
}

Engine::~Engine() = default;

void Engine::set_frame_observer(FrameObserver observer) { impl_->observer = std::move(observer); }
SimMetrics Engine::run() { return impl_->run(); }
const Topology& Engine::topology() const { return impl_->topo; }
const mac::TimingsNs& Engine::timings() const { return impl_->t; }
std::uint32_t Engine::modulation_order() const { return impl_->m; }
mac::Mac& Engine::mac(NodeId i) { return *impl_->nodes.at(i)->mac; }
mac::PacketQueue& Engine::queue(NodeId i) { return impl_->nodes.at(i)->queue; }

SimMetrics simulate(const Topology& topo, const SimConfig& cfg)
{
  Engine e(topo, cfg);
  return e.run();
}

} // namespace rcfd::sim
