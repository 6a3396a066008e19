#include <cmath>

#include "doctest.h"
#include "rcfd/analytic/bianchi.hpp"
#include "rcfd/verify/oracles.hpp"

using namespace rcfd::analytic;

TEST_CASE("a lone station never collides")
{
  const BianchiSolution s = bianchi_fixed_point(1, 16, 6);
  CHECK(s.p == 0);
  CHECK(s.tau == doctest::Approx(2.0 / 17).epsilon(1e-12));
}

TEST_CASE("fixed point is self-consistent")
{
  for (int n : {2, 10, 50}) {
    const BianchiSolution s = bianchi_fixed_point(n, 16, 6);
    CHECK(s.residual < 1e-10);
    CHECK(s.p == doctest::Approx(1 - std::pow(1 - s.tau, n - 1)).epsilon(1e-12));
    CHECK(std::abs(s.tau - bianchi_tau_of_p(s.p, 16, 6)) < 1e-10);
  }
}

TEST_CASE("backoff map equals the closed form away from p = 1/2")
{
  const int w = 16;
  const int m = 6;
  for (double p : {0.0, 0.1, 0.3, 0.49, 0.51, 0.8}) {
    const double closed = 2 * (1 - 2 * p) /
                          ((1 - 2 * p) * (w + 1) + p * w * (1 - std::pow(2 * p, m)));
    CHECK(bianchi_tau_of_p(p, w, m) == doctest::Approx(closed).epsilon(1e-12));
  }
  CHECK(std::isfinite(bianchi_tau_of_p(0.5, w, m)));
}

TEST_CASE("fixed point agrees with a slot-level simulation of the backoff")
{
  // The decoupling approximation is known to be accurate to about one
  // percent; the 3 sigma band of a 1e7 slot run is near 0.3 percent.
  const BianchiSolution s = bianchi_fixed_point(10, 16, 6);
  const auto mc = rcfd::verify::bianchi_monte_carlo(10, 16, 6, 10'000'000, 7);
  MESSAGE("tau model " << s.tau << ", simulated " << mc.mean << " +- " << mc.std_error);
  const double gap = std::abs(mc.mean - s.tau);
  CHECK(gap < std::max(3 * mc.std_error, 0.015 * s.tau));
}

TEST_CASE("transmission and success probabilities")
{
  auto one = ptr_ps(1, 0.3);
  CHECK(one.p_tr == doctest::Approx(0.3));
  CHECK(one.p_s == doctest::Approx(1));
  auto certain = ptr_ps(2, 1);
  CHECK(certain.p_tr == 1);
  CHECK(certain.p_s == 0);
  // Binomial pmf for three stations at tau = 0.2.
  const double p1 = 3 * 0.2 * 0.8 * 0.8;
  const double p0 = 0.8 * 0.8 * 0.8;
  auto three = ptr_ps(3, 0.2);
  CHECK(three.p_tr == doctest::Approx(1 - p0).epsilon(1e-12));
  CHECK(three.p_tr == doctest::Approx(0.488).epsilon(1e-12));
  CHECK(three.p_s == doctest::Approx(p1 / (1 - p0)).epsilon(1e-12));
  CHECK(three.p_s == doctest::Approx(0.786885).epsilon(1e-6));
  auto silent = ptr_ps(4, 0);
  CHECK(silent.p_tr == 0);
  CHECK(silent.p_s == 1);
  CHECK(silent.p_s_undefined);
}
