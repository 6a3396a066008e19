#include "rcfd/analytic/bianchi.hpp"

#include <cmath>

#include "rcfd/analytic/phy_timings.hpp"

namespace rcfd::analytic {

double bianchi_tau_of_p(double p, int w, int m)
{
  double sum = 0;
  double term = 1;
  for (int k = 0; k < m; ++k) {
    sum += term;
    term *= 2 * p;
  }
  return 2.0 / (w + 1.0 + p * w * sum);
}

BianchiSolution bianchi_fixed_point(int n, int w, int m)
{
  if (n < 1) {
    throw AnalyticError(AnalyticErrc::InvalidN, "station count must be at least 1");
  }
  if (w < 1 || m < 0) {
    throw AnalyticError(AnalyticErrc::InvalidArgument, "window must be positive, stage cap nonnegative");
  }
  auto p_of = [n](double tau) { return 1.0 - std::pow(1.0 - tau, n - 1); };
  // g is increasing in tau, negative at 0 and nonnegative at 1.
  auto g = [&](double tau) { return tau - bianchi_tau_of_p(p_of(tau), w, m); };

  constexpr double kTarget = 1e-10;
  constexpr int kCap = 200;
  double lo = 0;
  double hi = 1;
  BianchiSolution sol;
  for (int it = 1; it <= kCap; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double value = g(mid);
    sol.tau = mid;
    sol.p = p_of(mid);
    sol.residual = std::fabs(value);
    sol.iterations = it;
    if (sol.residual < kTarget && hi - lo < 1e-12) {
      return sol;
    }
    if (value > 0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (sol.residual < kTarget) {
    return sol;
  }
  throw AnalyticError(AnalyticErrc::NonConvergence, "backoff fixed point did not converge");
}

TransmissionProbabilities ptr_ps(int n, double tau)
{
  if (n < 1) {
    throw AnalyticError(AnalyticErrc::InvalidN, "station count must be at least 1");
  }
  if (!(tau >= 0 && tau <= 1)) {
    throw AnalyticError(AnalyticErrc::InvalidArgument, "tau must lie in [0, 1]");
  }
  TransmissionProbabilities out;
  out.p_tr = 1.0 - std::pow(1.0 - tau, n);
  if (out.p_tr <= 0) {
    out.p_tr = 0;
    out.p_s = 1;
    out.p_s_undefined = true;
    return out;
  }
  out.p_s = n * tau * std::pow(1.0 - tau, n - 1) / out.p_tr;
  return out;
}

} // namespace rcfd::analytic
