// Channel contract, driven by scripted MACs that send fixed frames.

#include <map>
#include <vector>

#include "doctest.h"
#include "rcfd/sim/engine.hpp"

using namespace rcfd;
using namespace rcfd::sim;
using mac::Frame;
using mac::FrameKind;

namespace {

struct Shot {
  TimeNs at;
  Frame frame;
};

struct Log {
  std::vector<TimeNs> busy;
  std::vector<TimeNs> idle;
  std::vector<std::pair<TimeNs, Frame>> received;
};

class ScriptMac : public mac::Mac {
public:
  ScriptMac(mac::MacContext& ctx, std::vector<Shot> shots, Log& log)
    : Mac(ctx), shots_(std::move(shots)), log_(log)
  {
    for (std::size_t i = 0; i < shots_.size(); ++i) {
      ctx.set_timer(shots_[i].at, static_cast<int>(i));
    }
  }
  void on_channel_busy() override { log_.busy.push_back(ctx_.now()); }
  void on_channel_idle() override { log_.idle.push_back(ctx_.now()); }
  void on_receive(const Frame& f) override { log_.received.emplace_back(ctx_.now(), f); }
  void on_tx_end(const Frame&) override {}
  void on_timer(int tag, std::uint64_t) override
  {
    const Frame& f = shots_[tag].frame;
    // The engine looks up delivered packets at their source, so the one on
    // the air stays queued; the one before it has settled by now. A discard
    // fate keeps erased frames from counting as acknowledged.
    if (f.kind == FrameKind::Data) {
      if (last_ != 0) {
        ctx_.queue().remove(last_, mac::PacketFate::RetryLimit, ctx_.now());
      }
      mac::Packet p;
      p.id = f.packet;
      p.src = ctx_.self();
      p.dst = f.dst;
      p.created = ctx_.now();
      ctx_.queue().push(p, ctx_.now());
      ctx_.queue().set_in_flight(p.id, true);
      last_ = p.id;
    }
    ctx_.transmit(f);
  }

private:
  std::vector<Shot> shots_;
  Log& log_;
  std::uint64_t last_ = 0;
};

Frame data(NodeId src, NodeId dst, std::uint64_t id, TimeNs airtime = 100000)
{
  Frame f;
  f.kind = FrameKind::Data;
  f.src = src;
  f.dst = dst;
  f.airtime = airtime;
  f.packet = id;
  return f;
}

// Nodes on a line one meter apart, each reaching only its direct neighbors.
Topology line(int n)
{
  std::vector<Point> pos;
  for (int i = 0; i < n; ++i) {
    pos.push_back({static_cast<double>(i), 0});
  }
  return connect(std::move(pos), 1.0);
}

struct Outcome {
  SimMetrics metrics;
  std::vector<FrameEvent> events;
  std::vector<Log> logs;
};

Outcome play(const Topology& topo, analytic::Protocol protocol,
             std::map<NodeId, std::vector<Shot>> script, double loss = 0,
             double duration = 1.0)
{
  SimConfig cfg;
  cfg.protocol = protocol;
  cfg.traffic.t_s_max = 0;
  cfg.duration_s = duration;
  cfg.loss_p = loss;
  cfg.queue_capacity = 1 << 20;
  cfg.max_age_s = 1e6;
  Outcome out;
  out.logs.resize(topo.size());
  auto factory = [&](mac::MacContext& ctx) -> std::unique_ptr<mac::Mac> {
    return std::make_unique<ScriptMac>(ctx, script[ctx.self()], out.logs[ctx.self()]);
  };
  Engine e(topo, cfg, factory);
  e.set_frame_observer([&](const FrameEvent& ev) { out.events.push_back(ev); });
  out.metrics = e.run();
  return out;
}

std::vector<FrameEvent> at_node(const Outcome& o, NodeId n, FrameEvent::Type type)
{
  std::vector<FrameEvent> v;
  for (const FrameEvent& e : o.events) {
    if (e.at == n && e.type == type) {
      v.push_back(e);
    }
  }
  return v;
}

} // namespace

TEST_CASE("hidden terminals collide at the shared receiver")
{
  const Topology t = line(3);
  REQUIRE_FALSE(t.in_range(0, 2));
  for (TimeNs offset : {TimeNs{0}, TimeNs{50000}}) {
    const Outcome o = play(t, analytic::Protocol::Dcf,
                           {{0, {{1000, data(0, 1, 1)}}}, {2, {{1000 + offset, data(2, 1, 2)}}}});
    CHECK(at_node(o, 1, FrameEvent::Type::Collided).size() == 2);
    CHECK(at_node(o, 1, FrameEvent::Type::Decoded).empty());
    CHECK(o.metrics.data_collisions == 2);
    CHECK(o.logs[1].received.empty());
  }
}

TEST_CASE("a full-duplex pair decodes both directions")
{
  const Topology t = line(2);
  const std::map<NodeId, std::vector<Shot>> script{{0, {{1000, data(0, 1, 1)}}},
                                                   {1, {{1000, data(1, 0, 2)}}}};
  const Outcome fd = play(t, analytic::Protocol::Rcfd, script);
  CHECK(at_node(fd, 0, FrameEvent::Type::Decoded).size() == 1);
  CHECK(at_node(fd, 1, FrameEvent::Type::Decoded).size() == 1);
  CHECK(fd.metrics.data_collisions == 0);

  // The same exchange between half-duplex radios loses both frames.
  const Outcome hd = play(t, analytic::Protocol::Dcf, script);
  CHECK(at_node(hd, 0, FrameEvent::Type::Collided).size() == 1);
  CHECK(at_node(hd, 1, FrameEvent::Type::Collided).size() == 1);
  CHECK(hd.metrics.data_collisions == 2);
}

TEST_CASE("a full-duplex receiver still loses to a third transmitter")
{
  const Topology t = line(3);
  const Outcome o = play(t, analytic::Protocol::Rcfd,
                         {{0, {{1000, data(0, 1, 1)}}},
                          {1, {{1000, data(1, 0, 2)}}},
                          {2, {{30000, data(2, 1, 3)}}}});
  CHECK(at_node(o, 1, FrameEvent::Type::Collided).size() == 2);
  CHECK(at_node(o, 0, FrameEvent::Type::Decoded).size() == 1);
}

TEST_CASE("back-to-back frames do not overlap")
{
  const Topology t = line(3);
  const Outcome o = play(t, analytic::Protocol::Dcf,
                         {{0, {{1000, data(0, 1, 1)}}}, {2, {{101000, data(2, 1, 2)}}}});
  CHECK(at_node(o, 1, FrameEvent::Type::Decoded).size() == 2);
  CHECK(o.metrics.data_collisions == 0);
}

TEST_CASE("carrier sense follows the frame one propagation delay late")
{
  const Topology t = line(3);
  const Outcome o = play(t, analytic::Protocol::Dcf, {{0, {{1000, data(0, 1, 1, 100000)}}}});
  // The receiver sees energy over [start + Tp, end + Tp).
  CHECK(o.logs[1].busy == std::vector<TimeNs>{2000});
  CHECK(o.logs[1].idle == std::vector<TimeNs>{102000});
  // The sender turns idle when its own signal has left.
  CHECK(o.logs[0].busy.empty());
  CHECK(o.logs[0].idle == std::vector<TimeNs>{102000});
  // Out of range: nothing.
  CHECK(o.logs[2].busy.empty());
  CHECK(o.logs[2].idle.empty());
  REQUIRE(o.logs[1].received.size() == 1);
  CHECK(o.logs[1].received[0].first == 102000);
  CHECK(at_node(o, 2, FrameEvent::Type::Decoded).empty());
}

TEST_CASE("Bernoulli erasure removes the configured share of data frames")
{
  const Topology t = line(2);
  const int frames = 100000;
  std::vector<Shot> shots;
  shots.reserve(frames);
  for (int k = 0; k < frames; ++k) {
    shots.push_back({TimeNs{k} * 20000 + 1000, data(0, 1, static_cast<std::uint64_t>(k + 1), 10000)});
  }
  const Outcome o = play(t, analytic::Protocol::Dcf, {{0, shots}}, 0.1, 3.0);
  const double rate =
    static_cast<double>(at_node(o, 1, FrameEvent::Type::Decoded).size()) / frames;
  CHECK(rate == doctest::Approx(0.9).epsilon(0.01 / 0.9));
  CHECK(o.metrics.erasures + at_node(o, 1, FrameEvent::Type::Decoded).size() == frames);
  CHECK(o.metrics.data_collisions == 0);
}

TEST_CASE("control frames are never erased")
{
  const Topology t = line(2);
  std::vector<Shot> shots;
  for (int k = 0; k < 2000; ++k) {
    Frame f;
    f.kind = FrameKind::Rts;
    f.src = 0;
    f.dst = 1;
    f.airtime = 10000;
    shots.push_back({TimeNs{k} * 20000 + 1000, f});
  }
  const Outcome o = play(t, analytic::Protocol::Dcf, {{0, shots}}, 0.5);
  CHECK(o.logs[1].received.size() == 2000);
}
