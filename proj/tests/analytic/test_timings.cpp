#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "rcfd/analytic/phy_timings.hpp"

using namespace rcfd::analytic;

namespace {

// OFDM frame: 20 us preamble and header, then 4 us symbols carrying the
// 16-bit service field, the payload and 6 tail bits.
std::int64_t ofdm_airtime(std::int64_t bytes, std::int64_t bits_per_symbol)
{
  const std::int64_t bits = 16 + 8 * bytes + 6;
  return 20 + 4 * ((bits + bits_per_symbol - 1) / bits_per_symbol);
}

} // namespace

TEST_CASE("data airtime at 6 Mbit/s")
{
  CHECK(t_data(1000, 6, TdMode::OfdmExact) == 1360);
  CHECK(t_data(1000, 6, TdMode::Calibrated) == 1400);
  CHECK(t_data(1000, 6, TdMode::Override, 1400) == 1400);
  CHECK(t_data(123, 54, TdMode::Override, 77.5) == 77.5);
}

TEST_CASE("data airtime matches frame arithmetic at every rate")
{
  const double rates[] = {6, 9, 12, 18, 24, 36, 48, 54};
  const int bps[] = {24, 36, 48, 72, 96, 144, 192, 216};
  for (int r = 0; r < 8; ++r) {
    CHECK(bits_per_symbol(rates[r]) == bps[r]);
    for (int len = 1; len <= 2400; len += 37) {
      CHECK(t_data(len, rates[r], TdMode::OfdmExact) == ofdm_airtime(len, bps[r]));
      CHECK(t_data(len, rates[r], TdMode::Calibrated) ==
            ofdm_airtime(len + kCalibratedMacOverheadBytes, bps[r]));
    }
  }
}

TEST_CASE("unsupported rates and bad modes are rejected")
{
  CHECK_THROWS_AS(bits_per_symbol(11), AnalyticError);
  try {
    t_data(100, 5.5, TdMode::OfdmExact);
    FAIL("expected an error");
  } catch (const AnalyticError& e) {
    CHECK(e.code() == AnalyticErrc::UnsupportedRate);
  }
  CHECK(parse_td_mode("ofdm-exact") == TdMode::OfdmExact);
  CHECK(parse_td_mode("calibrated") == TdMode::Calibrated);
  CHECK(parse_td_mode("override") == TdMode::Override);
  CHECK_THROWS_AS(parse_td_mode("exact"), AnalyticError);
  CHECK(std::string(to_string(TdMode::Calibrated)) == "calibrated");
}

TEST_CASE("timing validation")
{
  PhyTimings t;
  CHECK_NOTHROW(t.validate());
  t.subcarriers = 0;
  CHECK_THROWS_AS(t.validate(), AnalyticError);
  t = PhyTimings{};
  t.t_slot = -1;
  CHECK_THROWS_AS(t.validate(), AnalyticError);
}
