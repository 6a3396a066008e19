#include <cmath>

#include "doctest.h"
#include "rcfd/analytic/bianchi.hpp"
#include "rcfd/analytic/throughput.hpp"
#include "rcfd/verify/oracles.hpp"

using namespace rcfd::analytic;

namespace {

const PhyTimings kTimings{};
constexpr int kLength = 1000;
constexpr double kRate = 6;
const int kNs[] = {2, 10, 20, 50};

} // namespace

TEST_CASE("RCFD saturation throughput table")
{
  const double table[] = {1.8570, 1.0316, 0.9773, 0.9474};
  for (int q = 0; q < 4; ++q) {
    const double eta = eta_rcfd(kNs[q], kTimings, kLength, kRate).eta;
    INFO("N=" << kNs[q] << " eta=" << eta);
    CHECK(std::abs(eta - table[q]) <= 0.001);
  }
  // Two nodes always pair up: 2 T_d / T_S.
  CHECK(eta_rcfd(2, kTimings, kLength, kRate).eta == doctest::Approx(2 * 1400.0 / 1508));
}

TEST_CASE("RCFD throughput decreases towards the half-duplex limit")
{
  double prev = eta_rcfd(2, kTimings, kLength, kRate).eta;
  for (int n = 3; n <= 200; ++n) {
    const double eta = eta_rcfd(n, kTimings, kLength, kRate).eta;
    CHECK(eta < prev);
    prev = eta;
  }
  const ThroughputReport far = eta_rcfd(1'000'000, kTimings, kLength, kRate);
  CHECK(far.eta == doctest::Approx(far.t_d / far.t_s).epsilon(1e-5));
  CHECK_THROWS_AS(eta_rcfd(1, kTimings, kLength, kRate), AnalyticError);
}

TEST_CASE("BACK2F saturation throughput table")
{
  const double table[] = {0.9319, 0.9304, 0.9287, 0.9235};
  for (int q = 0; q < 4; ++q) {
    const double eta = eta_back2f(kNs[q], kTimings, kLength, kRate).eta;
    INFO("N=" << kNs[q] << " eta=" << eta);
    CHECK(std::abs(eta - table[q]) <= 0.005);
  }
  const ThroughputReport ideal = eta_back2f(10, kTimings, kLength, kRate, {}, 1.0);
  CHECK(ideal.eta == doctest::Approx(ideal.t_d / ideal.t_s).epsilon(1e-14));
}

TEST_CASE("FD MAC saturation throughput table")
{
  const double table[] = {1.6908, 0.9390, 0.8840, 0.8485};
  for (int q = 0; q < 4; ++q) {
    const ThroughputReport r = eta_fd(kNs[q], kTimings, kLength, kRate);
    INFO("N=" << kNs[q] << " eta=" << r.eta);
    CHECK(std::abs(r.eta - table[q]) <= 0.02 * table[q]);
    CHECK(r.p_s_hd + r.p_s_fd <= 1 + 1e-12);
  }
  const ThroughputReport two = eta_fd(2, kTimings, kLength, kRate);
  CHECK(two.p_s_fd == doctest::Approx(1).epsilon(1e-12));
  CHECK(std::abs(two.p_s_hd) < 1e-15);
  CHECK_THROWS_AS(eta_fd(1, kTimings, kLength, kRate), AnalyticError);
}

TEST_CASE("802.11 DCF")
{
  const double basic10 = eta_dcf(10, kTimings, kLength, kRate, false).eta;
  const double rts50 = eta_dcf(50, kTimings, kLength, kRate, true).eta;
  CHECK(basic10 < rts50);
  // As the attempt rate vanishes the channel idles.
  const ThroughputReport r = eta_dcf(10, kTimings, kLength, kRate, false);
  double prev = 1;
  for (double tau : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const TransmissionProbabilities tp = ptr_ps(10, tau);
    const double eta = eta_slotted(tp.p_tr, tp.p_s, r.t_d, kTimings.t_slot, r.t_s, r.t_c);
    CHECK(eta < prev);
    prev = eta;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("DCF throughput matches a renewal-reward simulation of the slot process")
{
  const ThroughputReport r = eta_dcf(10, kTimings, kLength, kRate, false);
  const auto mc = rcfd::verify::renewal_reward_eta(r.p_tr, r.p_s, r.t_d, kTimings.t_slot, r.t_s,
                                                   r.t_c, 4'000'000, 5);
  MESSAGE("model " << r.eta << ", simulated " << mc.mean << " +- " << mc.std_error);
  CHECK(std::abs(mc.mean - r.eta) <= 0.005 * r.eta);
}

TEST_CASE("protocol ordering at the reference settings")
{
  for (int n : kNs) {
    const double rcfd = eta_rcfd(n, kTimings, kLength, kRate).eta;
    const double fd = eta_fd(n, kTimings, kLength, kRate).eta;
    const double back2f = eta_back2f(n, kTimings, kLength, kRate).eta;
    const double dcf = eta_dcf(n, kTimings, kLength, kRate, false).eta;
    INFO("N=" << n);
    CHECK(rcfd > fd);
    CHECK(rcfd > back2f);
    CHECK(back2f > dcf);
  }
}

TEST_CASE("exact OFDM airtime stays within five percent of the calibrated values")
{
  const TdSpec exact{TdMode::OfdmExact, 0};
  for (int n : {2, 10, 20}) {
    for (Protocol p : {Protocol::Dcf, Protocol::DcfRtsCts, Protocol::FdMac, Protocol::Rcfd}) {
      const double cal = evaluate(p, n, kTimings, kLength, kRate).eta;
      const double ofdm = evaluate(p, n, kTimings, kLength, kRate, exact).eta;
      INFO(to_string(p) << " N=" << n);
      CHECK(std::abs(ofdm - cal) < 0.05 * cal);
    }
  }
}

TEST_CASE("protocol names round trip")
{
  for (Protocol p : {Protocol::Dcf, Protocol::DcfRtsCts, Protocol::FdMac, Protocol::Back2f,
                     Protocol::Rcfd}) {
    CHECK(parse_protocol(to_string(p)) == p);
  }
  CHECK_THROWS_AS(parse_protocol("csma"), AnalyticError);
}
