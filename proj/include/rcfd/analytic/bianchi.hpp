// Saturated binary exponential backoff fixed point.
//
// Every station is modeled as transmitting in a random slot with
// probability tau and colliding with conditional probability p:
//   tau = 2(1-2p) / [(1-2p)(W+1) + pW(1-(2p)^m)],  p = 1-(1-tau)^(N-1).

#pragma once

namespace rcfd::analytic {

struct BianchiSolution {
  double tau = 0;
  double p = 0;
  /// |tau - F(p(tau))| at the returned point.
  double residual = 0;
  int iterations = 0;
};

/// The backoff map tau = F(p). Written as 2 / (W+1 + pW * sum_{k<m} (2p)^k),
/// which equals the closed form and stays finite at p = 1/2.
double bianchi_tau_of_p(double p, int w, int m);

/// Solves the fixed point by bisection on tau in [0, 1]. Throws
/// NonConvergence if the residual target is missed within the iteration cap.
BianchiSolution bianchi_fixed_point(int n, int w, int m);

struct TransmissionProbabilities {
  double p_tr = 0;
  double p_s = 1;
  /// Set when tau = 0 makes p_s 0/0; p_s is then reported as 1.
  bool p_s_undefined = false;
};

/// P_tr = 1-(1-tau)^N and P_s = N tau (1-tau)^(N-1) / P_tr.
TransmissionProbabilities ptr_ps(int n, double tau);

} // namespace rcfd::analytic
