#include "rcfd/mac/frame.hpp"

namespace rcfd::mac {

const char* to_string(FrameKind kind)
{
  switch (kind) {
  case FrameKind::Data:
    return "data";
  case FrameKind::Ack:
    return "ack";
  case FrameKind::Rts:
    return "rts";
  case FrameKind::Cts:
    return "cts";
  }
  return "?";
}

TimingsNs TimingsNs::from(const analytic::PhyTimings& t, double t_data_us)
{
  TimingsNs n;
  n.ack = us_to_ns(t.t_ack);
  n.rts = us_to_ns(t.t_rts);
  n.cts = us_to_ns(t.t_cts);
  n.sifs = us_to_ns(t.t_sifs);
  n.difs = us_to_ns(t.t_difs);
  n.prop = us_to_ns(t.t_p);
  n.slot = us_to_ns(t.t_slot);
  n.round = us_to_ns(t.t_round);
  n.scan = us_to_ns(t.t_scan);
  n.header = us_to_ns(t.t_header);
  n.data = us_to_ns(t_data_us);
  n.w_initial = t.w_initial;
  n.stage_cap = t.stage_cap;
  n.subcarriers = t.subcarriers;
  return n;
}

} // namespace rcfd::mac
