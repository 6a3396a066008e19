#include "rcfd/analytic/phy_timings.hpp"

#include <cmath>

namespace rcfd::analytic {

void PhyTimings::validate() const
{
  const double durations[] = {t_ack, t_rts,   t_cts,  t_sifs, t_difs,
                              t_p,   t_slot,  t_round, t_scan, t_header};
  for (double d : durations) {
    if (!(d >= 0) || !std::isfinite(d)) {
      throw AnalyticError(AnalyticErrc::InvalidArgument, "timings must be finite and nonnegative");
    }
  }
  if (w_initial < 1) {
    throw AnalyticError(AnalyticErrc::InvalidArgument, "initial window must be at least 1");
  }
  if (stage_cap < 0 || stage_cap > 30) {
    throw AnalyticError(AnalyticErrc::InvalidArgument, "stage cap must lie in [0, 30]");
  }
  if (subcarriers < 2) {
    throw AnalyticError(AnalyticErrc::InvalidArgument, "at least two subcarriers are required");
  }
}

int bits_per_symbol(double rate_mbps)
{
  static constexpr struct {
    double rate;
    int bits;
  } kTable[] = {{6, 24}, {9, 36}, {12, 48}, {18, 72}, {24, 96}, {36, 144}, {48, 192}, {54, 216}};
  for (const auto& row : kTable) {
    if (rate_mbps == row.rate) {
      return row.bits;
    }
  }
  throw AnalyticError(AnalyticErrc::UnsupportedRate,
                      "unsupported rate " + std::to_string(rate_mbps) + " Mbit/s");
}

namespace {

// Preamble and signal field take 20 us, then 4 us per symbol carrying the
// 16 bit service field, the PSDU and the 6 tail bits.
double ofdm_airtime(int psdu_bytes, double rate_mbps)
{
  const int bits = 16 + 8 * psdu_bytes + 6;
  const int per_symbol = bits_per_symbol(rate_mbps);
  const int symbols = (bits + per_symbol - 1) / per_symbol;
  return 20.0 + 4.0 * symbols;
}

} // namespace

double t_data(int length_bytes, double rate_mbps, TdMode mode, double override_us)
{
  if (mode == TdMode::Override) {
    if (!(override_us > 0) || !std::isfinite(override_us)) {
      throw AnalyticError(AnalyticErrc::InvalidArgument, "override airtime must be positive");
    }
    return override_us;
  }
  if (length_bytes <= 0) {
    throw AnalyticError(AnalyticErrc::InvalidArgument, "payload length must be positive");
  }
  if (mode == TdMode::OfdmExact) {
    return ofdm_airtime(length_bytes, rate_mbps);
  }
  return ofdm_airtime(length_bytes + kCalibratedMacOverheadBytes, rate_mbps);
}

const char* to_string(TdMode mode)
{
  switch (mode) {
  case TdMode::OfdmExact:
    return "ofdm-exact";
  case TdMode::Calibrated:
    return "calibrated";
  case TdMode::Override:
    return "override";
  }
  return "?";
}

TdMode parse_td_mode(const std::string& text)
{
  if (text == "ofdm-exact") {
    return TdMode::OfdmExact;
  }
  if (text == "calibrated") {
    return TdMode::Calibrated;
  }
  if (text == "override") {
    return TdMode::Override;
  }
  throw AnalyticError(AnalyticErrc::InvalidArgument, "unknown t_d mode '" + text + "'");
}

} // namespace rcfd::analytic
