// Normalized saturation throughput of the five channel access schemes.

#pragma once

#include <string>

#include "rcfd/analytic/phy_timings.hpp"

namespace rcfd::analytic {

enum class Protocol { Dcf, DcfRtsCts, FdMac, Back2f, Rcfd };

const char* to_string(Protocol p);

/// Accepts "dcf", "dcf-rtscts", "fdmac", "back2f" and "rcfd".
Protocol parse_protocol(const std::string& text);

/// Whether the FD MAC denominator charges the success duration to every
/// successful exchange, single-winner and mutual-pair alike, or only to the
/// single-winner probability P_s.
enum class FdSuccessModel {
  /// P_s,hd + P_s,fd of the slots carry T_S. Matches the published table.
  PairAware,
  /// Only the single-winner P_s carries T_S; mutual pairs count as T_C.
  SingleWinner,
};

struct ThroughputReport {
  Protocol protocol = Protocol::Rcfd;
  int n = 0;
  int length_bytes = 0;
  double rate_mbps = 0;
  TdMode td_mode = TdMode::Calibrated;
  double t_d = 0;
  double eta = 0;
  double p_tr = 0;
  double p_s = 0;
  double p_s_hd = 0;
  double p_s_fd = 0;
  double t_s = 0;
  double t_c = 0;
  double tau = 0;
  double p = 0;
  bool p_s_undefined = false;
};

ThroughputReport eta_dcf(int n, const PhyTimings& timings, int length_bytes, double rate_mbps,
                         bool rts_cts, const TdSpec& td = {});

ThroughputReport eta_fd(int n, const PhyTimings& timings, int length_bytes, double rate_mbps,
                        const TdSpec& td = {}, FdSuccessModel model = FdSuccessModel::PairAware);

/// Uses timings.subcarriers for S. Pass a cached success probability to skip
/// the stationary solve; it does not depend on the payload.
ThroughputReport eta_back2f(int n, const PhyTimings& timings, int length_bytes, double rate_mbps,
                            const TdSpec& td = {}, double cached_p_s = -1);

ThroughputReport eta_rcfd(int n, const PhyTimings& timings, int length_bytes, double rate_mbps,
                          const TdSpec& td = {});

/// Throughput of a slotted random access channel: idle slots last t_slot,
/// successes t_s and collisions t_c.
double eta_slotted(double p_tr, double p_s, double t_d, double t_slot, double t_s, double t_c);

/// Throughput from success probability and slot durations for the
/// frequency-domain schemes: P_s T_d / (P_s T_S + (1-P_s) T_C).
double eta_from_success(double p_s, double t_d, double t_s, double t_c);

ThroughputReport evaluate(Protocol protocol, int n, const PhyTimings& timings, int length_bytes,
                          double rate_mbps, const TdSpec& td = {});

} // namespace rcfd::analytic
