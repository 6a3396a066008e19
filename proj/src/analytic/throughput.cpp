#include "rcfd/analytic/throughput.hpp"

#include <cmath>

#include "rcfd/analytic/back2f_chain.hpp"
#include "rcfd/analytic/bianchi.hpp"

namespace rcfd::analytic {

const char* to_string(Protocol p)
{
  switch (p) {
  case Protocol::Dcf:
    return "dcf";
  case Protocol::DcfRtsCts:
    return "dcf-rtscts";
  case Protocol::FdMac:
    return "fdmac";
  case Protocol::Back2f:
    return "back2f";
  case Protocol::Rcfd:
    return "rcfd";
  }
  return "?";
}

Protocol parse_protocol(const std::string& text)
{
  for (Protocol p : {Protocol::Dcf, Protocol::DcfRtsCts, Protocol::FdMac, Protocol::Back2f,
                     Protocol::Rcfd}) {
    if (text == to_string(p)) {
      return p;
    }
  }
  throw AnalyticError(AnalyticErrc::InvalidArgument, "unknown protocol '" + text + "'");
}

namespace {

ThroughputReport base_report(Protocol protocol, int n, const PhyTimings& timings,
                             int length_bytes, double rate_mbps, const TdSpec& td)
{
  timings.validate();
  ThroughputReport r;
  r.protocol = protocol;
  r.n = n;
  r.length_bytes = length_bytes;
  r.rate_mbps = rate_mbps;
  r.td_mode = td.mode;
  r.t_d = t_data(length_bytes, rate_mbps, td);
  return r;
}

double rts_success_time(const PhyTimings& t, double t_d)
{
  return t.t_difs + t.t_rts + t.t_cts + t_d + 3 * t.t_sifs + t.t_ack + 4 * t.t_p;
}

double rts_collision_time(const PhyTimings& t) { return t.t_difs + t.t_rts + t.t_p; }

} // namespace

ThroughputReport eta_dcf(int n, const PhyTimings& timings, int length_bytes, double rate_mbps,
                         bool rts_cts, const TdSpec& td)
{
  ThroughputReport r = base_report(rts_cts ? Protocol::DcfRtsCts : Protocol::Dcf, n, timings,
                                   length_bytes, rate_mbps, td);
  const BianchiSolution sol = bianchi_fixed_point(n, timings.w_initial, timings.stage_cap);
  const TransmissionProbabilities tp = ptr_ps(n, sol.tau);
  r.tau = sol.tau;
  r.p = sol.p;
  r.p_tr = tp.p_tr;
  r.p_s = tp.p_s;
  r.p_s_hd = tp.p_s;
  r.p_s_undefined = tp.p_s_undefined;
  if (rts_cts) {
    r.t_s = rts_success_time(timings, r.t_d);
    r.t_c = rts_collision_time(timings);
  } else {
    r.t_s = timings.t_difs + r.t_d + timings.t_sifs + timings.t_ack + 2 * timings.t_p;
    r.t_c = timings.t_difs + r.t_d + timings.t_p;
  }
  r.eta = eta_slotted(r.p_tr, r.p_s, r.t_d, timings.t_slot, r.t_s, r.t_c);
  return r;
}

ThroughputReport eta_fd(int n, const PhyTimings& timings, int length_bytes, double rate_mbps,
                        const TdSpec& td, FdSuccessModel model)
{
  if (n < 2) {
    throw AnalyticError(AnalyticErrc::InvalidN, "full-duplex pairing needs at least two nodes");
  }
  ThroughputReport r = base_report(Protocol::FdMac, n, timings, length_bytes, rate_mbps, td);
  const BianchiSolution sol = bianchi_fixed_point(n, timings.w_initial, timings.stage_cap);
  const TransmissionProbabilities tp = ptr_ps(n, sol.tau);
  const double tau = sol.tau;
  r.tau = tau;
  r.p = sol.p;
  r.p_tr = tp.p_tr;
  r.p_s = tp.p_s;
  r.p_s_undefined = tp.p_s_undefined;
  // A single winner whose receiver holds a packet for it, or exactly two
  // winners holding packets for each other, complete a full-duplex exchange.
  r.p_s_fd = n * tau * std::pow(1 - tau, n - 2) * (2 - tau) / (2.0 * (n - 1) * r.p_tr);
  r.p_s_hd = n * (n - 2.0) * tau * std::pow(1 - tau, n - 1) / ((n - 1.0) * r.p_tr);
  r.t_s = rts_success_time(timings, r.t_d);
  r.t_c = rts_collision_time(timings);
  const double success = model == FdSuccessModel::PairAware ? r.p_s_hd + r.p_s_fd : r.p_s;
  const double num = r.t_d * r.p_tr * (r.p_s_hd + 2 * r.p_s_fd);
  const double den = (1 - r.p_tr) * timings.t_slot + r.p_tr * success * r.t_s +
                     r.p_tr * (1 - success) * r.t_c;
  r.eta = num / den;
  return r;
}

double eta_slotted(double p_tr, double p_s, double t_d, double t_slot, double t_s, double t_c)
{
  const double num = p_tr * p_s * t_d;
  const double den = (1 - p_tr) * t_slot + p_tr * p_s * t_s + p_tr * (1 - p_s) * t_c;
  return num / den;
}

double eta_from_success(double p_s, double t_d, double t_s, double t_c)
{
  return p_s * t_d / (p_s * t_s + (1 - p_s) * t_c);
}

ThroughputReport eta_back2f(int n, const PhyTimings& timings, int length_bytes, double rate_mbps,
                            const TdSpec& td, double cached_p_s)
{
  ThroughputReport r = base_report(Protocol::Back2f, n, timings, length_bytes, rate_mbps, td);
  r.p_tr = 1;
  r.p_s = cached_p_s >= 0 ? cached_p_s : back2f_stationary(n, timings.subcarriers).p_s;
  r.p_s_hd = r.p_s;
  r.t_s = timings.t_difs + 2 * timings.t_round + r.t_d + timings.t_sifs + timings.t_ack +
          2 * timings.t_p;
  r.t_c = timings.t_difs + 2 * timings.t_round + r.t_d + timings.t_p;
  r.eta = eta_from_success(r.p_s, r.t_d, r.t_s, r.t_c);
  return r;
}

ThroughputReport eta_rcfd(int n, const PhyTimings& timings, int length_bytes, double rate_mbps,
                          const TdSpec& td)
{
  if (n < 2) {
    throw AnalyticError(AnalyticErrc::InvalidN, "the handshake needs at least two nodes");
  }
  ThroughputReport r = base_report(Protocol::Rcfd, n, timings, length_bytes, rate_mbps, td);
  r.p_tr = 1;
  r.p_s = 1;
  r.p_s_fd = 1.0 / (n - 1);
  r.p_s_hd = 1.0 - r.p_s_fd;
  r.t_s = timings.t_difs + 3 * timings.t_round + timings.t_header + r.t_d + timings.t_sifs +
          timings.t_ack + 2 * timings.t_p;
  r.eta = r.t_d * (r.p_s_hd + 2 * r.p_s_fd) / r.t_s;
  return r;
}

ThroughputReport evaluate(Protocol protocol, int n, const PhyTimings& timings, int length_bytes,
                          double rate_mbps, const TdSpec& td)
{
  switch (protocol) {
  case Protocol::Dcf:
    return eta_dcf(n, timings, length_bytes, rate_mbps, false, td);
  case Protocol::DcfRtsCts:
    return eta_dcf(n, timings, length_bytes, rate_mbps, true, td);
  case Protocol::FdMac:
    return eta_fd(n, timings, length_bytes, rate_mbps, td);
  case Protocol::Back2f:
    return eta_back2f(n, timings, length_bytes, rate_mbps, td);
  case Protocol::Rcfd:
    return eta_rcfd(n, timings, length_bytes, rate_mbps, td);
  }
  throw AnalyticError(AnalyticErrc::InvalidArgument, "unknown protocol");
}

} // namespace rcfd::analytic
