// Timing constants shared by the analysis and the simulator, and the
// data-frame airtime model.

#pragma once

#include <stdexcept>
#include <string>

namespace rcfd::analytic {

enum class AnalyticErrc { UnsupportedRate, NonConvergence, InvalidN, InvalidArgument };

class AnalyticError : public std::runtime_error {
public:
  AnalyticError(AnalyticErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  AnalyticErrc code() const { return code_; }

private:
  AnalyticErrc code_;
};

/// All durations in microseconds.
struct PhyTimings {
  double t_ack = 50;
  double t_rts = 58;
  double t_cts = 50;
  double t_sifs = 10;
  double t_difs = 28;
  double t_p = 1;
  double t_slot = 9;
  double t_round = 6;
  double t_scan = 28;
  /// Header time of the RCFD data exchange. Zero unless overridden.
  double t_header = 0;
  /// Initial contention window W.
  int w_initial = 16;
  /// Backoff stage cap m; the window stops doubling at W * 2^m.
  int stage_cap = 6;
  /// OFDM subcarriers S available to frequency-domain contention.
  int subcarriers = 52;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

/// How the airtime of a data frame is obtained.
enum class TdMode {
  /// OFDM PHY arithmetic on the payload alone.
  OfdmExact,
  /// OFDM PHY arithmetic with a 30 byte MAC header and FCS added. Gives
  /// 1400 us for 1000 bytes at 6 Mbit/s, the airtime behind the analysis table.
  Calibrated,
  /// A fixed value supplied by the caller.
  Override,
};

struct TdSpec {
  TdMode mode = TdMode::Calibrated;
  double override_us = 0;
};

/// MAC header plus FCS added by TdMode::Calibrated, in bytes.
constexpr int kCalibratedMacOverheadBytes = 30;

/// Data bits per OFDM symbol at an 802.11a/g rate. Throws UnsupportedRate.
int bits_per_symbol(double rate_mbps);

/// Airtime of a data frame in microseconds.
double t_data(int length_bytes, double rate_mbps, TdMode mode, double override_us = 0);

inline double t_data(int length_bytes, double rate_mbps, const TdSpec& spec)
{
  return t_data(length_bytes, rate_mbps, spec.mode, spec.override_us);
}

const char* to_string(TdMode mode);

/// Accepts "ofdm-exact", "calibrated" and "override". Throws InvalidArgument.
TdMode parse_td_mode(const std::string& text);

} // namespace rcfd::analytic
