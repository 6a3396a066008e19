#include "rcfd/sim/config.hpp"

#include <cmath>

namespace rcfd::sim {

void SimConfig::validate() const
{
  auto bad = [](const std::string& what) { throw ConfigError(ConfigErrc::InvalidValue, what); };
  timings.validate();
  if (length_bytes < 1) {
    bad("payload length must be positive");
  }
  if (!(duration_s > 0)) {
    bad("duration must be positive");
  }
  if (!(loss_p >= 0 && loss_p < 1)) {
    bad("loss_p must lie in [0, 1)");
  }
  if (queue_capacity < 1 || max_attempts < 1 || !(max_age_s > 0)) {
    bad("queue limits must be positive");
  }
  if (!(traffic.lambda_s > 0) || !(traffic.t_s_max >= 0) || !(traffic.t_on > 0) ||
      !(traffic.t_off >= 0) || !(traffic.rate_bps > 0)) {
    bad("traffic parameters out of range");
  }
  if (traffic.saturated && traffic.saturation_depth < 1) {
    bad("saturation depth must be positive");
  }
  if (modulation_order < 0) {
    bad("modulation order must be non-negative");
  }
  analytic::bits_per_symbol(rate_mbps);
}

bool full_duplex(analytic::Protocol p)
{
  return p == analytic::Protocol::FdMac || p == analytic::Protocol::Rcfd;
}

std::uint32_t modulation_order_for(std::size_t n, int subcarriers, int requested)
{
  const std::size_t half = static_cast<std::size_t>(subcarriers / 2);
  if (requested > 0) {
    if (n > static_cast<std::size_t>(requested) * half) {
      throw ConfigError(ConfigErrc::CapacityExceeded,
                        "CapacityExceeded: " + std::to_string(n) + " nodes exceed m*S/2 = " +
                          std::to_string(static_cast<std::size_t>(requested) * half));
    }
    return static_cast<std::uint32_t>(requested);
  }
  std::uint32_t m = 1;
  while (static_cast<std::size_t>(m) * half < n) {
    m *= 2;
  }
  return m;
}

double offered_traffic(const Topology& topo, const TrafficParams& traffic)
{
  const double on_share = traffic.t_on / (traffic.t_on + traffic.t_off);
  return traffic.rate_bps * static_cast<double>(topo.directed_pairs()) * on_share;
}

double jain_index(const std::vector<double>& p)
{
  if (p.empty()) {
    return 1;
  }
  double sum = 0;
  double sq = 0;
  for (double v : p) {
    sum += v;
    sq += v * v;
  }
  if (sq == 0) {
    return 1;
  }
  return sum * sum / (static_cast<double>(p.size()) * sq);
}

} // namespace rcfd::sim
