// Run configuration for one simulation.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcfd/analytic/phy_timings.hpp"
#include "rcfd/analytic/throughput.hpp"
#include "rcfd/mac/packet_queue.hpp"
#include "rcfd/sim/topology.hpp"

namespace rcfd::sim {

enum class ConfigErrc { CapacityExceeded, InvalidValue };

class ConfigError : public std::runtime_error {
public:
  ConfigError(ConfigErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ConfigErrc code() const { return code_; }

private:
  ConfigErrc code_;
};

struct TrafficParams {
  /// Rate of the exponential application start times, per second.
  double lambda_s = 0.5;
  /// Start times beyond this are redrawn. Also the transient cut.
  double t_s_max = 5;
  double t_on = 0.1;
  double t_off = 0.1;
  /// Constant bit rate while ON.
  double rate_bps = 1e6;
  /// Every node keeps a few packets for random neighbors queued at all
  /// times instead of running applications.
  bool saturated = false;
  int saturation_depth = 2;
  /// Nodes kept saturated; empty means every node.
  std::vector<NodeId> saturated_sources;
};

struct SimConfig {
  analytic::Protocol protocol = analytic::Protocol::Rcfd;
  analytic::PhyTimings timings;
  analytic::TdSpec td{analytic::TdMode::OfdmExact, 0};
  int length_bytes = 1000;
  double rate_mbps = 6;
  TrafficParams traffic;
  /// Measured time after the transient.
  double duration_s = 20;
  /// Per-receiver erasure probability of data frames.
  double loss_p = 0;
  std::size_t queue_capacity = 1000;
  double max_age_s = 1.0;
  /// Transmission attempts before a packet is dropped.
  int max_attempts = 7;
  mac::FdPairingRule pairing = mac::FdPairingRule::FullQueue;
  /// 0 picks the smallest power of two that maps every node.
  int modulation_order = 0;
  std::uint64_t seed = 1;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Whether a protocol runs its radios in full duplex.
bool full_duplex(analytic::Protocol p);

/// Modulation order for an RCFD run of n nodes. Throws CapacityExceeded
/// when an explicit order cannot map every node.
std::uint32_t modulation_order_for(std::size_t n, int subcarriers, int requested);

/// Aggregate offered load in bit/s over every directed in-range pair.
double offered_traffic(const Topology& topo, const TrafficParams& traffic);

/// (sum p)^2 / (n sum p^2); 1 when every entry is zero.
double jain_index(const std::vector<double>& p);

} // namespace rcfd::sim
